/**
 * Status polling for long-running solves.
 *
 * 1 s base interval with multiplicative backoff; no streaming. Concurrent
 * polls for the same scenario are de-duplicated onto one in-flight loop.
 */

import { Client, Scenario } from "./api";

export interface PollOptions {
  intervalMs?: number;
  backoff?: number;
  maxIntervalMs?: number;
  /** injectable for tests */
  sleep?: (ms: number) => Promise<void>;
}

const TERMINAL = new Set(["Done", "Failed"]);

function defaultSleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

const inFlight = new Map<string, Promise<Scenario>>();

/**
 * Poll until the scenario reaches Done or Failed and return the final
 * snapshot (the caller decides how to treat Failed). A Draft scenario is
 * also terminal here: nothing is running, so there is no point waiting.
 */
export function pollUntilSettled(
  client: Client,
  scenarioId: string,
  options: PollOptions = {},
): Promise<Scenario> {
  const existing = inFlight.get(scenarioId);
  if (existing) return existing;

  const intervalMs = options.intervalMs ?? 1000;
  const backoff = options.backoff ?? 1.5;
  const maxIntervalMs = options.maxIntervalMs ?? 10000;
  const sleep = options.sleep ?? defaultSleep;

  const loop = (async () => {
    let wait = intervalMs;
    for (;;) {
      const scenario = await client.getScenario(scenarioId);
      if (TERMINAL.has(scenario.status) || scenario.status === "Draft") {
        return scenario;
      }
      await sleep(wait);
      wait = Math.min(wait * backoff, maxIntervalMs);
    }
  })();

  const tracked = loop.finally(() => {
    inFlight.delete(scenarioId);
  });
  inFlight.set(scenarioId, tracked);
  return tracked;
}
