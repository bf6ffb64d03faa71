import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { renderLabelPanel } from "../src/views/labelPanel.js";
import { FIXTURE_DIMENSIONS, makeFixtureServer } from "./fixtureServer.js";

function pick(root: HTMLElement, dimension: string, choice: string, low = false): void {
  const radio = root.querySelector<HTMLInputElement>(`#choice-${dimension}-${choice}`)!;
  radio.checked = true;
  if (low) {
    root.querySelector<HTMLInputElement>(`#lowconf-${dimension}`)!.checked = true;
  }
}

async function submit(root: HTMLElement): Promise<void> {
  root.querySelector("form")!.dispatchEvent(new Event("submit", { cancelable: true }));
  await new Promise((resolve) => setTimeout(resolve, 0));
}

describe("labeling panel", () => {
  let server = makeFixtureServer();
  let api = new ApiClient("", server.fetch);

  beforeEach(() => {
    server = makeFixtureServer();
    api = new ApiClient("", server.fetch);
    document.body.innerHTML = "";
  });

  it("shows the green banner when the submission agrees with the primary", async () => {
    const panel = renderLabelPanel({
      api,
      campaignId: "c1",
      dimensions: FIXTURE_DIMENSIONS,
      entityId: "e1",
    });
    document.body.append(panel);
    pick(panel, "damage", "positive");
    pick(panel, "intent", "negative");
    await submit(panel);
    const banner = panel.querySelector(".banner")!;
    expect(banner.classList.contains("hidden")).toBe(false);
    expect(banner.classList.contains("banner-agree")).toBe(true);
    expect(banner.classList.contains("banner-disagree")).toBe(false);
    expect(banner.textContent).toContain("has been recorded");
    expect(banner.querySelector(".discuss-link")).toBeNull();
  });

  it("shows the yellow banner with a discuss link when the submission disagrees", async () => {
    const panel = renderLabelPanel({
      api,
      campaignId: "c1",
      dimensions: FIXTURE_DIMENSIONS,
      entityId: "e1",
      talkHref: (entityId) => `#/campaign/c1/entity/${entityId}/talk`,
    });
    document.body.append(panel);
    pick(panel, "damage", "negative");
    pick(panel, "intent", "negative");
    await submit(panel);
    const banner = panel.querySelector(".banner")!;
    expect(banner.classList.contains("banner-disagree")).toBe(true);
    expect(banner.textContent).toContain("disagrees with the current primary label");
    const link = banner.querySelector<HTMLAnchorElement>(".discuss-link")!;
    expect(link).not.toBeNull();
    expect(link.getAttribute("href")).toBe("#/campaign/c1/entity/e1/talk");
  });

  it("confidence alone never triggers the disagree banner", async () => {
    const panel = renderLabelPanel({
      api,
      campaignId: "c1",
      dimensions: FIXTURE_DIMENSIONS,
      entityId: "e1",
    });
    document.body.append(panel);
    pick(panel, "damage", "positive", true);
    pick(panel, "intent", "negative", true);
    await submit(panel);
    expect(panel.querySelector(".banner")!.classList.contains("banner-agree")).toBe(true);
  });

  it("keeps form state and shows an inline error when a dimension is unpicked", async () => {
    const panel = renderLabelPanel({
      api,
      campaignId: "c1",
      dimensions: FIXTURE_DIMENSIONS,
      entityId: "e1",
    });
    document.body.append(panel);
    pick(panel, "damage", "positive");
    const note = panel.querySelector<HTMLTextAreaElement>(".note")!;
    note.value = "typed already";
    await submit(panel);
    const error = panel.querySelector(".form-error")!;
    expect(error.classList.contains("hidden")).toBe(false);
    expect(error.textContent).toContain("intent");
    expect(note.value).toBe("typed already");
    expect(server.requests.filter((r) => r.method === "POST")).toHaveLength(0);
  });

  it("labels by external ref through the quick-label endpoint when no entity id", async () => {
    const panel = renderLabelPanel({
      api,
      campaignId: "c1",
      dimensions: FIXTURE_DIMENSIONS,
      entityId: null,
      externalRef: "change/999",
    });
    document.body.append(panel);
    pick(panel, "damage", "positive");
    pick(panel, "intent", "negative");
    await submit(panel);
    expect(server.requests.some((r) => r.path === "/quick-label")).toBe(true);
    expect(
      [...server.entities.values()].some((e) => e.external_ref === "change/999"),
    ).toBe(true);
    expect(panel.querySelector(".banner")!.classList.contains("banner-agree")).toBe(true);
  });
});
