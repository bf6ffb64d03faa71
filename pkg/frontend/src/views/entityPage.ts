/**
 * Entity page: content snapshot, primary label and the viewer's own label
 * on top; every individual label with confidence color coding and notes
 * below; a bold-edit dialog for the primary label; the talk thread link.
 *
 * The edit dialog carries the revision token the page rendered from and
 * keeps its submit button disabled until the acknowledgement box is
 * checked. A stale-revision conflict opens a dialog showing the revision
 * and values the label moved to, prompting a reload before retrying.
 */

import { ApiClient, ApiRequestError } from "../api.js";
import { clear, el, formatTimestamp } from "../dom.js";
import type { DimensionSchema, EntityView, IndividualLabel } from "../types.js";
import { renderLabelPanel } from "./labelPanel.js";

export interface EntityPageOptions {
  api: ApiClient;
  campaignId: string;
  dimensions: DimensionSchema[];
  view: EntityView;
  onChanged?: () => void;
}

function labelRow(label: IndividualLabel, dimensions: DimensionSchema[]): HTMLElement {
  const row = el("tr", { class: "label-row", "data-author": label.author });
  row.append(el("td", { class: "author" }, [label.author]));
  for (const dim of dimensions) {
    const value = label.values.find((v) => v.dimension === dim.name);
    if (!value) {
      row.append(el("td", {}, ["-"]));
      continue;
    }
    const display = value.choice === "positive" ? dim.positive_value : dim.negative_value;
    const cell = el(
      "td",
      {
        class: `choice choice-${value.choice} confidence-${value.confidence}`,
        title: value.confidence === "low" ? "submitted with low confidence" : "",
      },
      [value.confidence === "low" ? `${display} (low confidence)` : display],
    );
    row.append(cell);
  }
  row.append(el("td", { class: "note" }, [label.note ?? ""]));
  row.append(el("td", { class: "when" }, [formatTimestamp(label.updated_at)]));
  return row;
}

export function renderEntityPage(options: EntityPageOptions): HTMLElement {
  const { view, dimensions } = options;
  const root = el("article", { class: "entity-page" });

  if (view.entity.excluded) {
    root.append(
      el("div", { class: "banner banner-excluded" }, [
        `This entity is excluded from the dataset` +
          (view.entity.exclusion_reason ? `: ${view.entity.exclusion_reason}` : "") +
          ". It stays viewable for the record.",
      ]),
    );
  }

  root.append(el("h2", {}, [view.entity.external_ref]));
  root.append(el("pre", { class: "snapshot" }, [view.entity.content_snapshot]));

  const primaryBox = el("section", { class: "primary-box" });
  primaryBox.append(el("h3", {}, ["Primary label"]));
  if (view.primary) {
    const list = el("dl", { class: "primary-values" });
    for (const dim of dimensions) {
      const choice = view.primary.values[dim.name];
      const display = choice === "positive" ? dim.positive_value : dim.negative_value;
      list.append(el("dt", {}, [dim.name]), el("dd", { "data-dimension": dim.name }, [display]));
    }
    primaryBox.append(
      list,
      el("p", { class: "revision" }, [`revision ${view.primary.revision}`]),
    );
    primaryBox.append(renderEditDialog(options));
  } else {
    primaryBox.append(el("p", {}, ["No labels yet; the first label sets the primary."]));
  }
  root.append(primaryBox);

  const own = el("section", { class: "own-label" });
  own.append(el("h3", {}, ["Your label"]));
  own.append(
    renderLabelPanel({
      api: options.api,
      campaignId: options.campaignId,
      dimensions,
      entityId: view.entity.id,
      initial: view.own_label?.values,
      initialNote: view.own_label?.note ?? null,
      onRecorded: () => options.onChanged?.(),
    }),
  );
  root.append(own);

  const all = el("section", { class: "all-labels" });
  all.append(el("h3", {}, [`Individual labels (${view.labels.length})`]));
  const table = el("table", { class: "labels-table" });
  const head = el("tr", {}, [el("th", {}, ["who"])]);
  for (const dim of dimensions) head.append(el("th", {}, [dim.name]));
  head.append(el("th", {}, ["note"]), el("th", {}, ["updated"]));
  table.append(head);
  for (const label of view.labels) table.append(labelRow(label, dimensions));
  all.append(table);
  root.append(all);

  root.append(
    el("p", {}, [
      el(
        "a",
        { href: `#/campaign/${options.campaignId}/entity/${view.entity.id}/talk` },
        [view.has_discussion ? "Open discussion" : "Start a discussion"],
      ),
    ]),
  );
  return root;
}

function renderEditDialog(options: EntityPageOptions): HTMLElement {
  const { view, dimensions } = options;
  const primary = view.primary!;
  const wrapper = el("div", { class: "edit-primary" });
  const openButton = el("button", { class: "open-edit", type: "button" }, [
    "Edit primary label",
  ]);
  const dialog = el("div", { class: "edit-dialog hidden" });

  const form = el("form", { class: "edit-form", "data-base-revision": String(primary.revision) });
  const selects = new Map<string, HTMLSelectElement>();
  for (const dim of dimensions) {
    const select = el("select", { name: `primary-${dim.name}` });
    select.append(
      el("option", { value: "positive" }, [dim.positive_value]),
      el("option", { value: "negative" }, [dim.negative_value]),
    );
    select.value = primary.values[dim.name] ?? "positive";
    selects.set(dim.name, select);
    form.append(el("label", {}, [dim.name, select]));
  }
  const rationale = el("textarea", {
    class: "rationale",
    placeholder: "optional rationale for the history",
  });
  form.append(el("label", {}, ["Rationale", rationale]));

  const acknowledgement = el("input", { type: "checkbox", class: "acknowledge" });
  const submit = el("button", { type: "submit", class: "save-primary" }, ["Save primary label"]);
  submit.disabled = true;
  acknowledgement.addEventListener("change", () => {
    submit.disabled = !acknowledgement.checked;
  });
  form.append(
    el("label", { class: "acknowledge-label" }, [acknowledgement, view.acknowledgement_text]),
    submit,
  );

  const conflictBox = el("div", { class: "conflict-dialog hidden", role: "alertdialog" });

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void save();
  });

  async function save(): Promise<void> {
    const values: Record<string, string> = {};
    for (const [dimension, select] of selects) values[dimension] = select.value;
    try {
      await options.api.editPrimary(
        options.campaignId,
        view.entity.id,
        values,
        Number(form.dataset.baseRevision),
        rationale.value || null,
      );
      options.onChanged?.();
    } catch (error) {
      if (error instanceof ApiRequestError && error.code === "revision_conflict") {
        showConflict(error);
      } else if (error instanceof ApiRequestError) {
        conflictBox.classList.remove("hidden");
        clear(conflictBox);
        conflictBox.append(`${error.code}: ${error.message}`);
      }
    }
  }

  function showConflict(error: ApiRequestError): void {
    clear(conflictBox);
    conflictBox.classList.remove("hidden");
    const current = (error.payload["current_values"] ?? {}) as Record<string, string>;
    const currentRevision = error.payload["current_revision"];
    conflictBox.append(
      el("p", { class: "conflict-title" }, [
        `Someone else changed the primary label (now at revision ${currentRevision}).`,
      ]),
    );
    const list = el("ul", { class: "conflict-values" });
    for (const dim of dimensions) {
      const choice = current[dim.name];
      const display = choice === "positive" ? dim.positive_value : dim.negative_value;
      list.append(el("li", {}, [`${dim.name}: ${display}`]));
    }
    const reload = el("button", { type: "button", class: "reload" }, [
      "Reload and review before retrying",
    ]);
    reload.addEventListener("click", () => options.onChanged?.());
    conflictBox.append(list, reload);
  }

  openButton.addEventListener("click", () => dialog.classList.toggle("hidden"));
  dialog.append(form, conflictBox);
  wrapper.append(openButton, dialog);
  return wrapper;
}
