/**
 * Labeling panel: per-dimension choice toggles, a low-confidence toggle per
 * dimension, an optional note, and a submit button.
 *
 * After a submission the panel shows a green confirmation when the label
 * agrees with the current primary label, or a yellow banner with a link to
 * the entity's talk thread when it disagrees. Validation and conflict
 * errors render inline and keep the form state.
 */

import { ApiClient, ApiRequestError } from "../api.js";
import { clear, el } from "../dom.js";
import type { DimensionSchema, LabelValue, SubmitOutcome } from "../types.js";

export interface LabelPanelOptions {
  api: ApiClient;
  campaignId: string;
  dimensions: DimensionSchema[];
  /** Known entity id, or null when labeling by external ref (quick label). */
  entityId: string | null;
  externalRef?: string;
  initial?: LabelValue[];
  initialNote?: string | null;
  onRecorded?: (outcome: SubmitOutcome) => void;
  /** Builds the href of the "discuss" link in the disagree banner. */
  talkHref?: (entityId: string) => string;
}

export function renderLabelPanel(options: LabelPanelOptions): HTMLElement {
  const root = el("section", { class: "label-panel" });
  const form = el("form", { class: "label-form" });
  const banner = el("div", { class: "banner hidden", role: "status" });
  const errorBox = el("div", { class: "form-error hidden" });

  const choiceInputs = new Map<string, () => LabelValue | null>();
  for (const dim of options.dimensions) {
    const initial = options.initial?.find((v) => v.dimension === dim.name);
    const group = el("fieldset", { class: "dimension", "data-dimension": dim.name });
    group.append(el("legend", {}, [dim.name]));

    const positive = el("input", {
      type: "radio",
      name: `choice-${dim.name}`,
      value: "positive",
      id: `choice-${dim.name}-positive`,
    });
    const negative = el("input", {
      type: "radio",
      name: `choice-${dim.name}`,
      value: "negative",
      id: `choice-${dim.name}-negative`,
    });
    if (initial?.choice === "positive") positive.checked = true;
    if (initial?.choice === "negative") negative.checked = true;
    const lowConfidence = el("input", {
      type: "checkbox",
      id: `lowconf-${dim.name}`,
      class: "low-confidence",
    });
    if (initial?.confidence === "low") lowConfidence.checked = true;

    group.append(
      el("label", { for: positive.id }, [positive, dim.positive_value]),
      el("label", { for: negative.id }, [negative, dim.negative_value]),
      el("label", { for: lowConfidence.id, class: "low-confidence-label" }, [
        lowConfidence,
        "low confidence",
      ]),
    );
    form.append(group);
    choiceInputs.set(dim.name, () => {
      const choice = positive.checked ? "positive" : negative.checked ? "negative" : null;
      if (choice === null) return null;
      return {
        dimension: dim.name,
        choice,
        confidence: lowConfidence.checked ? "low" : "high",
      };
    });
  }

  const note = el("textarea", { class: "note", placeholder: "optional note" });
  if (options.initialNote) note.value = options.initialNote;
  const submit = el("button", { type: "submit", class: "submit" }, ["Submit label"]);
  form.append(el("label", {}, ["Note", note]), submit, errorBox);

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void handleSubmit();
  });

  async function handleSubmit(): Promise<void> {
    errorBox.classList.add("hidden");
    const values: LabelValue[] = [];
    for (const [dimension, read] of choiceInputs) {
      const value = read();
      if (value === null) {
        showError(`Pick a value for ${dimension}.`);
        return;
      }
      values.push(value);
    }
    submit.disabled = true;
    try {
      const outcome =
        options.entityId !== null
          ? await options.api.submitLabel(
              options.campaignId,
              options.entityId,
              values,
              note.value || null,
            )
          : await options.api.quickLabel(
              options.campaignId,
              options.externalRef ?? "",
              values,
              note.value || null,
            );
      showOutcome(outcome);
      options.onRecorded?.(outcome);
    } catch (error) {
      if (error instanceof ApiRequestError) showError(`${error.code}: ${error.message}`);
      else showError("Network problem; your label was not lost, try submitting again.");
    } finally {
      submit.disabled = false;
    }
  }

  function showError(message: string): void {
    errorBox.textContent = message;
    errorBox.classList.remove("hidden");
  }

  function showOutcome(outcome: SubmitOutcome): void {
    clear(banner);
    banner.classList.remove("hidden", "banner-agree", "banner-disagree");
    if (outcome.status === "recorded_agree") {
      banner.classList.add("banner-agree");
      banner.append("Your label has been recorded.");
    } else {
      banner.classList.add("banner-disagree");
      banner.append(
        "Your label has been recorded, but it disagrees with the current primary label. ",
      );
      const entityId = outcome.entity_id ?? outcome.entity_link;
      const href = options.talkHref?.(entityId) ?? `#/entity/${entityId}/talk`;
      banner.append(el("a", { href, class: "discuss-link" }, ["Discuss on the talk page"]));
    }
  }

  root.append(banner, form);
  return root;
}
