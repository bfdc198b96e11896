/**
 * Editable hierarchy model.
 *
 * Only leaves carry desk/office requirements; branch totals are always
 * derived as the sum over children, so the summation invariant holds by
 * construction and manual branch entry is impossible.
 */

import { TeamNode } from "./api";

export interface Totals {
  desks: number;
  offices: number;
}

/** Structural problems that make the tree unusable (duplicates, unknown
 * parents, cycles, empty leaves). Empty array means the tree is sound. */
export function validateTree(nodes: TeamNode[]): string[] {
  const problems: string[] = [];
  const byId = new Map<string, TeamNode>();
  for (const node of nodes) {
    if (byId.has(node.id)) problems.push(`duplicate team ${node.id}`);
    byId.set(node.id, node);
  }
  for (const node of nodes) {
    if (node.parent !== null && !byId.has(node.parent)) {
      problems.push(`team ${node.id}: unknown parent ${node.parent}`);
    }
  }
  if (problems.length > 0) return problems;

  // cycle check: walk each node to a root, bounded by the node count
  for (const node of nodes) {
    let current: TeamNode | undefined = node;
    for (let steps = 0; current && current.parent !== null; steps++) {
      if (steps > nodes.length) {
        problems.push(`cycle involving team ${node.id}`);
        break;
      }
      current = byId.get(current.parent);
    }
  }
  if (problems.length > 0) return problems;

  for (const node of nodes) {
    if (isLeaf(nodes, node.id)) {
      const d = node.desks ?? 0;
      const o = node.offices ?? 0;
      if (d < 0 || o < 0) problems.push(`team ${node.id}: negative requirement`);
      if (d === 0 && o === 0) {
        problems.push(`team ${node.id}: leaf needs at least one desk or office`);
      }
    }
  }
  return problems;
}

export function isLeaf(nodes: TeamNode[], id: string): boolean {
  return !nodes.some((n) => n.parent === id);
}

/** Requirement totals per team: leaves from their own fields, branches
 * as the sum over children (recursively). Assumes validateTree passed. */
export function deriveTotals(nodes: TeamNode[]): Map<string, Totals> {
  const totals = new Map<string, Totals>();
  const children = new Map<string, TeamNode[]>();
  for (const node of nodes) {
    if (node.parent !== null) {
      const list = children.get(node.parent) ?? [];
      list.push(node);
      children.set(node.parent, list);
    }
  }
  const visit = (node: TeamNode): Totals => {
    const cached = totals.get(node.id);
    if (cached) return cached;
    const kids = children.get(node.id) ?? [];
    let total: Totals;
    if (kids.length === 0) {
      total = { desks: node.desks ?? 0, offices: node.offices ?? 0 };
    } else {
      total = { desks: 0, offices: 0 };
      for (const kid of kids) {
        const sub = visit(kid);
        total.desks += sub.desks;
        total.offices += sub.offices;
      }
    }
    totals.set(node.id, total);
    return total;
  };
  for (const node of nodes) visit(node);
  return totals;
}

/** Immutable leaf edit; throws on branch nodes so branch totals can only
 * ever be derived. */
export function setLeafRequirement(
  nodes: TeamNode[],
  id: string,
  field: "desks" | "offices",
  value: number,
): TeamNode[] {
  if (!Number.isInteger(value) || value < 0) {
    throw new Error(`team ${id}: ${field} must be a non-negative integer`);
  }
  const target = nodes.find((n) => n.id === id);
  if (!target) throw new Error(`unknown team ${id}`);
  if (!isLeaf(nodes, id)) {
    throw new Error(`team ${id} is a branch; edit its leaves instead`);
  }
  return nodes.map((n) => (n.id === id ? { ...n, [field]: value } : n));
}

/** Document sent to the service: leaves keep their requirement fields,
 * branches carry structure only (the service re-derives their totals). */
export function toServiceDoc(nodes: TeamNode[]): TeamNode[] {
  return nodes.map((n) =>
    isLeaf(nodes, n.id)
      ? { id: n.id, parent: n.parent, desks: n.desks ?? 0, offices: n.offices ?? 0 }
      : { id: n.id, parent: n.parent },
  );
}

/** Count desk/office seats in a floor-plan document the client uploaded.
 * This only reads the document back; no geometry is evaluated. */
export function countSeats(planDoc: { seats: { kind: string }[] }): Totals {
  let desks = 0;
  let offices = 0;
  for (const seat of planDoc.seats) {
    if (seat.kind === "desk") desks++;
    else if (seat.kind === "office") offices++;
  }
  return { desks, offices };
}

/** Client-side infeasibility check before submitting: root demand against
 * seat supply. Messages mirror the service's 422 wording so they can be
 * shown in the same inline slots. */
export function precheckSupply(nodes: TeamNode[], supply: Totals): string[] {
  const violations = validateTree(nodes);
  if (violations.length > 0) return violations;
  const totals = deriveTotals(nodes);
  let desks = 0;
  let offices = 0;
  for (const node of nodes) {
    if (node.parent === null) {
      const t = totals.get(node.id)!;
      desks += t.desks;
      offices += t.offices;
    }
  }
  if (desks > supply.desks) {
    violations.push(`desk demand ${desks} exceeds supply ${supply.desks}`);
  }
  if (offices > supply.offices) {
    violations.push(`office demand ${offices} exceeds supply ${supply.offices}`);
  }
  return violations;
}

/** Attribute a violation message to a team id when it names one
 * ("team x: ..."), so the editor can show it next to the offending row.
 * Returns null for plan-wide messages (e.g. supply violations). */
export function violationTeam(message: string): string | null {
  const match = /^team ([^:]+):/.exec(message);
  return match ? match[1] : null;
}
