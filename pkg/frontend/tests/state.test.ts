import { describe, expect, it } from "vitest";

import { parseRoute, routeHash } from "../src/state.js";

describe("hash routing", () => {
  it("parses every route shape", () => {
    expect(parseRoute("")).toEqual({ kind: "campaigns" });
    expect(parseRoute("#/campaigns")).toEqual({ kind: "campaigns" });
    expect(parseRoute("#/campaign/c1")).toEqual({ kind: "dashboard", campaignId: "c1" });
    expect(parseRoute("#/campaign/c1/entity/e7")).toEqual({
      kind: "entity",
      campaignId: "c1",
      entityId: "e7",
    });
    expect(parseRoute("#/campaign/c1/entity/e7/talk")).toEqual({
      kind: "entity-talk",
      campaignId: "c1",
      entityId: "e7",
    });
    expect(parseRoute("#/campaign/c1/talk")).toEqual({
      kind: "campaign-talk",
      campaignId: "c1",
    });
    expect(parseRoute("#/campaign/c1/eval")).toEqual({ kind: "eval", campaignId: "c1" });
    expect(parseRoute("#/notifications")).toEqual({ kind: "notifications" });
  });

  it("parses the quick-label deep link with an encoded external ref", () => {
    const route = parseRoute("#/quick-label?campaign=c1&ref=wiki%2Fdiff%2F42");
    expect(route).toEqual({
      kind: "quick-label",
      campaignId: "c1",
      externalRef: "wiki/diff/42",
    });
  });

  it("round-trips routes through routeHash", () => {
    const hashes = [
      "#/campaigns",
      "#/campaign/c1",
      "#/campaign/c1/entity/e7",
      "#/campaign/c1/entity/e7/talk",
      "#/campaign/c1/talk",
      "#/campaign/c1/eval",
      "#/notifications",
    ];
    for (const hash of hashes) {
      expect(routeHash(parseRoute(hash))).toBe(hash);
    }
  });
});
