/**
 * Campaign dashboard: progress bars (label-count and primary composition),
 * the sortable table, datasheet sections with revision history, and the
 * campaign talk entry point. All numbers are server-computed.
 */

import { ApiClient } from "../api.js";
import { el, formatTimestamp } from "../dom.js";
import type { CampaignDetail, CampaignStats } from "../types.js";
import { renderTableView } from "./tableView.js";

export interface DashboardOptions {
  api: ApiClient;
  detail: CampaignDetail;
  stats: CampaignStats;
  onOpenEntity?: (entityId: string) => void;
}

function bar(label: string, fraction: number, cssClass: string): HTMLElement {
  const row = el("div", { class: "bar-row" });
  const track = el("div", { class: "bar-track" });
  const fill = el("div", { class: `bar-fill ${cssClass}` });
  fill.style.width = `${Math.round(fraction * 100)}%`;
  track.append(fill);
  row.append(
    el("span", { class: "bar-label" }, [label]),
    track,
    el("span", { class: "bar-value" }, [`${(fraction * 100).toFixed(0)}%`]),
  );
  return row;
}

export function renderDashboard(options: DashboardOptions): HTMLElement {
  const { detail, stats } = options;
  const root = el("section", { class: "dashboard" });
  root.append(el("h2", {}, [detail.name]));

  const progress = el("section", { class: "progress" });
  progress.append(el("h3", {}, ["Progress"]));
  progress.append(
    el("p", {}, [
      `${stats.n_entities} entities in the dataset, ${stats.n_with_primary} with a primary label, `,
      `${detail.n_excluded} excluded.`,
    ]),
  );
  const multi = stats.entities.filter((e) => e.n_labels >= 2).length;
  progress.append(
    bar(
      "entities with 2+ labels",
      stats.n_entities ? multi / stats.n_entities : 0,
      "fill-coverage",
    ),
  );
  for (const dim of detail.dimensions) {
    const fraction = stats.primary_fractions[dim]?.positive ?? 0;
    const positiveName =
      detail.schema.dimensions.find((d) => d.name === dim)?.positive_value ?? "positive";
    progress.append(bar(`${dim}: ${positiveName}`, fraction, "fill-composition"));
  }
  const contributors = Object.entries(stats.contributions).sort((a, b) => b[1] - a[1]);
  progress.append(
    el("p", { class: "contributors" }, [
      `${contributors.length} contributors` +
        (contributors.length
          ? `, most active: ${contributors
              .slice(0, 3)
              .map(([who, n]) => `${who} (${n})`)
              .join(", ")}`
          : ""),
    ]),
  );
  root.append(progress);

  root.append(
    renderTableView({
      api: options.api,
      campaignId: detail.id,
      dimensions: detail.dimensions,
      onOpenEntity: options.onOpenEntity,
    }),
  );

  const sheet = el("section", { class: "datasheet" });
  sheet.append(el("h3", {}, ["Datasheet"]));
  for (const section of detail.datasheet.sections) {
    const revisions = section.history.revisions;
    const current = revisions[revisions.length - 1];
    const block = el("details", { class: "datasheet-section", "data-section": section.name });
    block.append(
      el("summary", {}, [`${section.name} (revision ${current.revision})`]),
      el("pre", { class: "section-text" }, [current.text]),
    );
    const history = el("ul", { class: "section-history" });
    for (const rev of revisions) {
      history.append(
        el("li", {}, [`r${rev.revision} by ${rev.author} at ${formatTimestamp(rev.timestamp)}`]),
      );
    }
    const editor = el("textarea", { class: "section-editor" });
    editor.value = current.text;
    const save = el("button", { type: "button", class: "save-section" }, ["Save revision"]);
    save.addEventListener("click", () => {
      void options.api.editDatasheet(detail.id, section.name, editor.value);
    });
    block.append(history, editor, save);
    sheet.append(block);
  }
  root.append(sheet);

  root.append(
    el("p", {}, [
      el("a", { href: `#/campaign/${detail.id}/talk` }, ["Campaign talk"]),
      " · ",
      el("a", { href: `#/campaign/${detail.id}/eval` }, ["Evaluation report"]),
    ]),
  );
  return root;
}
