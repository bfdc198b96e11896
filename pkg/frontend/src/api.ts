/**
 * Typed client for the scenario service HTTP API.
 *
 * Every number the UI displays comes through this module; the client
 * performs no allocation math and no geometry of its own.
 */

export type ScenarioStatus = "Draft" | "Queued" | "Running" | "Done" | "Failed";

export interface TeamNode {
  id: string;
  parent: string | null;
  desks?: number;
  offices?: number;
}

export interface Scenario {
  id: string;
  plan_id: string;
  hierarchy: TeamNode[];
  config: Record<string, unknown>;
  status: ScenarioStatus;
  created: number;
  updated: number;
  job_id?: string;
  levels?: number[];
  error?: string;
  elapsed?: number;
}

export interface LevelMetrics {
  level: number;
  seats_allocated: number;
  mean_central_seat_distance: number | null;
  mean_office_distance: number | null;
  max_central_seat_distance: number | null;
}

export interface Report {
  method: string;
  seed: number;
  objective: number;
  per_level: LevelMetrics[];
}

export interface CompareRow {
  level: number;
  mean_central_seat_distance: number | null;
  mean_office_distance: number | null;
  max_central_seat_distance: number | null;
}

export interface CompareDoc {
  a: string;
  b: string;
  per_level: CompareRow[];
}

/** Non-2xx response from the service; `violations` splits the body's
 * semicolon-joined message list (the 422 shape for precheck failures). */
export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }

  get violations(): string[] {
    return this.message
      .split(";")
      .map((v) => v.trim())
      .filter((v) => v.length > 0);
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class Client {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = fetch,
  ) {}

  private async request(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<Response> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      let message = `${method} ${path} failed with ${response.status}`;
      try {
        const doc = await response.json();
        if (doc && typeof doc.error === "string") message = doc.error;
        else if (doc && typeof doc.status === "string") message = doc.status;
      } catch {
        // non-JSON error body: keep the generic message
      }
      throw new ApiError(response.status, message);
    }
    return response;
  }

  private async json<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.request(method, path, body);
    return (await response.json()) as T;
  }

  /** POST /plans */
  uploadPlan(doc: unknown): Promise<{ id: string }> {
    return this.json("POST", "/plans", doc);
  }

  /** POST /scenarios */
  createScenario(doc: {
    plan_id: string;
    hierarchy: TeamNode[];
    config?: Record<string, unknown>;
  }): Promise<{ id: string; status: ScenarioStatus; created: number }> {
    return this.json("POST", "/scenarios", doc);
  }

  /** PATCH /scenarios/{id} — edits reset the scenario to Draft. */
  patchScenario(
    id: string,
    doc: { hierarchy?: TeamNode[]; config?: Record<string, unknown> },
  ): Promise<{ id: string; status: ScenarioStatus }> {
    return this.json("PATCH", `/scenarios/${id}`, doc);
  }

  /** POST /scenarios/{id}/solve */
  submitSolve(
    id: string,
    configOverride?: Record<string, unknown>,
  ): Promise<{ job_id: string; status: ScenarioStatus }> {
    return this.json("POST", `/scenarios/${id}/solve`, configOverride ?? {});
  }

  /** GET /scenarios/{id} */
  getScenario(id: string): Promise<Scenario> {
    return this.json("GET", `/scenarios/${id}`);
  }

  /** GET /scenarios/{id}/report */
  getReport(id: string): Promise<Report> {
    return this.json("GET", `/scenarios/${id}/report`);
  }

  /** GET /scenarios/{id}/allocation */
  getAllocation(id: string): Promise<Record<string, unknown>> {
    return this.json("GET", `/scenarios/${id}/allocation`);
  }

  /** GET /scenarios/{id}/render/{level}.svg — pass-through, no client
   * geometry: the SVG bytes are rendered as received. */
  async getRenderSvg(id: string, level: number): Promise<string> {
    const response = await this.request("GET", `/scenarios/${id}/render/${level}.svg`);
    return response.text();
  }

  /** GET /scenarios/{a}/compare/{b} */
  compareScenarios(a: string, b: string): Promise<CompareDoc> {
    return this.json("GET", `/scenarios/${a}/compare/${b}`);
  }
}
