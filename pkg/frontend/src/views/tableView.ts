/**
 * Campaign table with the four attention-routing sort buttons.
 *
 * Sorting is entirely server-driven: every button re-requests the table
 * with the matching sort mode and renders rows in the order returned.
 * Rows where the primary label differs from the viewer's own label are
 * highlighted.
 */

import { ApiClient } from "../api.js";
import { clear, el } from "../dom.js";
import type { SortMode, TableRow } from "../types.js";

const SORT_BUTTONS: { mode: SortMode; label: string }[] = [
  { mode: "fewest_labels", label: "Provide more labels" },
  { mode: "highest_disagreement", label: "Build consensus" },
  { mode: "differs_from_mine", label: "Differs from mine" },
  { mode: "recent_activity", label: "Recent activity" },
];

export interface TableViewOptions {
  api: ApiClient;
  campaignId: string;
  dimensions: string[];
  initialSort?: SortMode;
  onOpenEntity?: (entityId: string) => void;
}

export function renderTableView(options: TableViewOptions): HTMLElement {
  const root = el("section", { class: "campaign-table" });
  const controls = el("div", { class: "sort-buttons", role: "toolbar" });
  const body = el("tbody");
  const table = el("table", { class: "entity-table" });
  const header = el("tr", {}, [el("th", {}, ["entity"])]);
  for (const dim of options.dimensions) header.append(el("th", {}, [`primary: ${dim}`]));
  header.append(
    el("th", {}, ["labels"]),
    el("th", {}, ["disagreement"]),
    el("th", {}, ["discussion"]),
  );
  table.append(el("thead", {}, [header]), body);

  let activeSort: SortMode = options.initialSort ?? "recent_activity";

  for (const { mode, label } of SORT_BUTTONS) {
    const button = el(
      "button",
      { type: "button", class: "sort-button", "data-sort": mode },
      [label],
    );
    button.addEventListener("click", () => {
      activeSort = mode;
      void refresh();
    });
    controls.append(button);
  }

  async function refresh(): Promise<void> {
    const rows = await options.api.table(options.campaignId, activeSort);
    for (const button of controls.querySelectorAll("button")) {
      button.classList.toggle("active", button.dataset.sort === activeSort);
    }
    renderRows(rows);
  }

  function renderRows(rows: TableRow[]): void {
    clear(body);
    for (const row of rows) {
      const tr = el("tr", {
        class: row.differs_from_viewer ? "row differs" : "row",
        "data-entity": row.entity_id,
        "data-disagreement": String(row.disagreement),
      });
      const link = el("a", { href: `#/campaign/${options.campaignId}/entity/${row.entity_id}` }, [
        row.external_ref,
      ]);
      link.addEventListener("click", () => options.onOpenEntity?.(row.entity_id));
      tr.append(el("td", { class: "ref" }, [link]));
      for (const dim of options.dimensions) {
        tr.append(el("td", {}, [row.primary_values?.[dim] ?? "-"]));
      }
      tr.append(
        el("td", { class: "n-labels" }, [String(row.n_labels)]),
        // server-computed; shown verbatim
        el("td", { class: "disagreement" }, [row.disagreement.toFixed(3)]),
        el("td", { class: "discussion" }, [row.has_discussion ? "yes" : ""]),
      );
      body.append(tr);
    }
  }

  root.append(controls, table);
  void refresh();
  return root;
}
