/**
 * Scenario view model: the state behind the editor page, kept free of
 * DOM concerns so it can be tested headlessly.
 *
 * Edits are local until saved via PATCH; optimistic edits are rolled
 * back if the PATCH is rejected. Displayed status always mirrors the
 * last poll or response from the service.
 */

import { ApiError, Client, Scenario, ScenarioStatus, TeamNode } from "./api";
import {
  Totals,
  deriveTotals,
  precheckSupply,
  setLeafRequirement,
  toServiceDoc,
  violationTeam,
} from "./hierarchy";
import { PollOptions, pollUntilSettled } from "./poll";

export interface ViolationMap {
  /** violations attributable to a team, keyed by team id */
  byTeam: Map<string, string[]>;
  /** plan-wide violations (supply, structure) */
  general: string[];
}

function groupViolations(messages: string[]): ViolationMap {
  const byTeam = new Map<string, string[]>();
  const general: string[] = [];
  for (const message of messages) {
    const team = violationTeam(message);
    if (team === null) {
      general.push(message);
    } else {
      const list = byTeam.get(team) ?? [];
      list.push(message);
      byTeam.set(team, list);
    }
  }
  return { byTeam, general };
}

export class ScenarioView {
  status: ScenarioStatus = "Draft";
  violations: ViolationMap = { byTeam: new Map(), general: [] };
  levels: number[] = [];
  selectedLevel = 0;
  lastError: string | null = null;

  private nodes: TeamNode[];
  private savedNodes: TeamNode[];

  constructor(
    private readonly client: Client,
    public readonly scenarioId: string,
    hierarchy: TeamNode[],
    private readonly supply: Totals,
    private readonly pollOptions: PollOptions = {},
  ) {
    this.nodes = hierarchy.map((n) => ({ ...n }));
    this.savedNodes = this.nodes;
  }

  get hierarchy(): TeamNode[] {
    return this.nodes;
  }

  get dirty(): boolean {
    return this.nodes !== this.savedNodes;
  }

  /** Totals for every team with branch rows derived live from leaves. */
  totals(): Map<string, Totals> {
    return deriveTotals(this.nodes);
  }

  /** Local leaf edit; branch totals update immediately via totals(). */
  editLeaf(id: string, field: "desks" | "offices", value: number): void {
    this.nodes = setLeafRequirement(this.nodes, id, field, value);
    this.violations = groupViolations(precheckSupply(this.nodes, this.supply));
  }

  /** True when the client-side check finds no reason the solve would be
   * rejected; the service precheck remains authoritative. */
  get submittable(): boolean {
    return (
      this.violations.general.length === 0 && this.violations.byTeam.size === 0
    );
  }

  /** PATCH the edited hierarchy. Rolls the local edit back and surfaces
   * the violations inline when the service rejects it. */
  async save(): Promise<boolean> {
    if (!this.dirty) return true;
    const attempted = this.nodes;
    try {
      const result = await this.client.patchScenario(this.scenarioId, {
        hierarchy: toServiceDoc(attempted),
      });
      this.status = result.status;
      this.savedNodes = attempted;
      this.lastError = null;
      return true;
    } catch (err) {
      this.nodes = this.savedNodes;
      this.applyError(err);
      return false;
    }
  }

  /**
   * Save pending edits, submit a solve, and poll until it settles.
   * Returns the final scenario snapshot, or null if the submission was
   * rejected (violations are then shown inline next to the teams).
   */
  async editAndSubmit(): Promise<Scenario | null> {
    if (!(await this.save())) return null;
    try {
      const submitted = await this.client.submitSolve(this.scenarioId);
      this.status = submitted.status;
      this.lastError = null;
    } catch (err) {
      this.applyError(err);
      return null;
    }
    const final = await pollUntilSettled(
      this.client,
      this.scenarioId,
      this.pollOptions,
    );
    this.status = final.status;
    this.levels = final.levels ?? [];
    if (this.selectedLevel >= this.levels.length) this.selectedLevel = 0;
    this.lastError = final.status === "Failed" ? (final.error ?? null) : null;
    return final;
  }

  /** SVG for the selected level, passed through untouched. */
  render(): Promise<string> {
    return this.client.getRenderSvg(this.scenarioId, this.selectedLevel);
  }

  private applyError(err: unknown): void {
    if (err instanceof ApiError && err.status === 422) {
      this.violations = groupViolations(err.violations);
      this.lastError = null;
    } else if (err instanceof Error) {
      this.lastError = err.message;
    } else {
      this.lastError = String(err);
    }
  }
}
