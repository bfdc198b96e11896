/**
 * Side-by-side scenario comparison: gating, delta table shaping, and the
 * office-distance highlight. All numbers come from the service's compare
 * endpoint; nothing is recomputed client-side.
 */

import { CompareDoc, Scenario } from "./api";

export interface DeltaRow {
  level: number;
  meanCentral: number | null;
  meanOffice: number | null;
  maxCentral: number | null;
  /** office-distance rows with a real difference are called out, e.g.
   * when comparing delayed vs non-delayed office runs */
  highlightOffice: boolean;
}

/** The compare panel stays disabled until both scenarios are Done. */
export function canCompare(a: Scenario | null, b: Scenario | null): boolean {
  return a !== null && b !== null && a.status === "Done" && b.status === "Done";
}

/** Human hint for why the panel is disabled. */
export function compareHint(a: Scenario | null, b: Scenario | null): string | null {
  if (canCompare(a, b)) return null;
  if (a === null || b === null) return "select two scenarios to compare";
  const pending = a.status !== "Done" ? a : b;
  return `scenario ${pending.id} is ${pending.status}`;
}

export function deltaRows(doc: CompareDoc, epsilon = 1e-12): DeltaRow[] {
  return doc.per_level.map((row) => ({
    level: row.level,
    meanCentral: row.mean_central_seat_distance,
    meanOffice: row.mean_office_distance,
    maxCentral: row.max_central_seat_distance,
    highlightOffice:
      row.mean_office_distance !== null &&
      Math.abs(row.mean_office_distance) > epsilon,
  }));
}

export function allDeltasZero(doc: CompareDoc, epsilon = 1e-12): boolean {
  return doc.per_level.every((row) =>
    [
      row.mean_central_seat_distance,
      row.mean_office_distance,
      row.max_central_seat_distance,
    ].every((v) => v === null || Math.abs(v) <= epsilon),
  );
}

const fmt = (v: number | null): string => (v === null ? "-" : v.toFixed(2));

/** Plain-text delta table (also used by tests as a stable rendering). */
export function formatDeltaTable(doc: CompareDoc): string {
  const lines = [`${doc.b} minus ${doc.a}`, "level  mean  office  max"];
  for (const row of deltaRows(doc)) {
    const mark = row.highlightOffice ? " *" : "";
    lines.push(
      `${row.level}  ${fmt(row.meanCentral)}  ${fmt(row.meanOffice)}${mark}  ` +
        fmt(row.maxCentral),
    );
  }
  return lines.join("\n");
}
