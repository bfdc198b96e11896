/**
 * Minimal page wiring for index.html. All state lives in ScenarioView;
 * this file only moves values between the model and the DOM.
 */

import { Client, Scenario, TeamNode } from "./api";
import { allDeltasZero, canCompare, compareHint, formatDeltaTable } from "./compare";
import { countSeats, isLeaf } from "./hierarchy";
import { ScenarioView } from "./view";

const $ = (id: string) => document.getElementById(id)!;

const client = new Client(
  (window as unknown as { SEATPLAN_API?: string }).SEATPLAN_API ?? "",
);

let view: ScenarioView | null = null;
let compareTarget: Scenario | null = null;

function renderTree(): void {
  if (!view) return;
  const totals = view.totals();
  const rows = view.hierarchy.map((node: TeamNode) => {
    const t = totals.get(node.id)!;
    const leaf = isLeaf(view!.hierarchy, node.id);
    const problems = view!.violations.byTeam.get(node.id) ?? [];
    const cells = leaf
      ? `<input data-team="${node.id}" data-field="desks" type="number" min="0"
           value="${t.desks}">
         <input data-team="${node.id}" data-field="offices" type="number" min="0"
           value="${t.offices}">`
      : `<span>${t.desks}</span><span>${t.offices}</span>`;
    const note = problems.length
      ? `<em class="violation">${problems.join("; ")}</em>`
      : "";
    return `<li><code>${node.id}</code> ${cells} ${note}</li>`;
  });
  $("tree").innerHTML = `<ul>${rows.join("")}</ul>`;
  $("general-violations").textContent = view.violations.general.join("; ");
  ($("submit") as HTMLButtonElement).disabled = !view.submittable;
  $("status").textContent = view.status + (view.lastError ? `: ${view.lastError}` : "");

  $("tree")
    .querySelectorAll<HTMLInputElement>("input[data-team]")
    .forEach((input) => {
      input.onchange = () => {
        view!.editLeaf(
          input.dataset.team!,
          input.dataset.field as "desks" | "offices",
          Number(input.value),
        );
        renderTree();
      };
    });
}

async function renderLevel(): Promise<void> {
  if (!view || view.status !== "Done") return;
  const select = $("level") as HTMLSelectElement;
  select.innerHTML = view.levels
    .map((l) => `<option value="${l}">level ${l}</option>`)
    .join("");
  select.value = String(view.selectedLevel);
  $("floor").innerHTML = await view.render();
}

async function refreshCompare(): Promise<void> {
  if (!view) return;
  const mine = await client.getScenario(view.scenarioId);
  const hint = compareHint(mine, compareTarget);
  if (!canCompare(mine, compareTarget)) {
    $("compare-panel").textContent = hint ?? "";
    return;
  }
  const doc = await client.compareScenarios(mine.id, compareTarget!.id);
  const headline = allDeltasZero(doc) ? "identical results" : "differences found";
  const svgs = await Promise.all([
    client.getRenderSvg(mine.id, view.selectedLevel),
    client.getRenderSvg(compareTarget!.id, view.selectedLevel),
  ]);
  $("compare-panel").innerHTML =
    `<p>${headline}</p><pre>${formatDeltaTable(doc)}</pre>` +
    `<div class="pair"><div>${svgs[0]}</div><div>${svgs[1]}</div></div>`;
}

$("open").onclick = async () => {
  const scenarioId = ($("scenario-id") as HTMLInputElement).value.trim();
  const planDoc = JSON.parse(($("plan-doc") as HTMLTextAreaElement).value);
  const scenario = await client.getScenario(scenarioId);
  view = new ScenarioView(client, scenarioId, scenario.hierarchy, countSeats(planDoc));
  view.status = scenario.status;
  view.levels = scenario.levels ?? [];
  renderTree();
  await renderLevel();
};

$("submit").onclick = async () => {
  if (!view) return;
  $("status").textContent = "submitting...";
  await view.editAndSubmit();
  renderTree();
  await renderLevel();
};

$("level").onchange = async () => {
  if (!view) return;
  view.selectedLevel = Number(($("level") as HTMLSelectElement).value);
  await renderLevel();
};

$("compare-load").onclick = async () => {
  const otherId = ($("compare-id") as HTMLInputElement).value.trim();
  compareTarget = otherId ? await client.getScenario(otherId) : null;
  await refreshCompare();
};
