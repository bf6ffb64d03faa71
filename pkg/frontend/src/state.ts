/**
 * Client view state and hash routing.
 *
 * Routes:
 *   #/campaigns
 *   #/campaign/{c}                      dashboard (table + datasheet)
 *   #/campaign/{c}/entity/{e}           entity page
 *   #/campaign/{c}/entity/{e}/talk      entity talk
 *   #/campaign/{c}/talk                 campaign talk
 *   #/campaign/{c}/eval                 evaluation report
 *   #/notifications
 *   #/quick-label?campaign={c}&ref={r}  in-flow labeling by external ref
 *                                       (deep-linkable from a bookmarklet)
 */

import type { Session } from "./types.js";

export type Route =
  | { kind: "campaigns" }
  | { kind: "dashboard"; campaignId: string }
  | { kind: "entity"; campaignId: string; entityId: string }
  | { kind: "entity-talk"; campaignId: string; entityId: string }
  | { kind: "campaign-talk"; campaignId: string }
  | { kind: "eval"; campaignId: string }
  | { kind: "notifications" }
  | { kind: "quick-label"; campaignId: string; externalRef: string };

export interface ViewState {
  session: Session | null;
  activeCampaign: string | null;
  route: Route;
}

export function parseRoute(hash: string): Route {
  const raw = hash.replace(/^#\/?/, "");
  const [path, query = ""] = raw.split("?");
  const parts = path.split("/").filter(Boolean);
  const params = new URLSearchParams(query);
  if (parts[0] === "quick-label") {
    return {
      kind: "quick-label",
      campaignId: params.get("campaign") ?? "",
      externalRef: params.get("ref") ?? "",
    };
  }
  if (parts[0] === "notifications") return { kind: "notifications" };
  if (parts[0] === "campaign" && parts[1]) {
    const campaignId = parts[1];
    if (parts[2] === "entity" && parts[3]) {
      if (parts[4] === "talk") return { kind: "entity-talk", campaignId, entityId: parts[3] };
      return { kind: "entity", campaignId, entityId: parts[3] };
    }
    if (parts[2] === "talk") return { kind: "campaign-talk", campaignId };
    if (parts[2] === "eval") return { kind: "eval", campaignId };
    return { kind: "dashboard", campaignId };
  }
  return { kind: "campaigns" };
}

export function routeHash(route: Route): string {
  switch (route.kind) {
    case "campaigns":
      return "#/campaigns";
    case "dashboard":
      return `#/campaign/${route.campaignId}`;
    case "entity":
      return `#/campaign/${route.campaignId}/entity/${route.entityId}`;
    case "entity-talk":
      return `#/campaign/${route.campaignId}/entity/${route.entityId}/talk`;
    case "campaign-talk":
      return `#/campaign/${route.campaignId}/talk`;
    case "eval":
      return `#/campaign/${route.campaignId}/eval`;
    case "notifications":
      return "#/notifications";
    case "quick-label":
      return `#/quick-label?campaign=${route.campaignId}&ref=${encodeURIComponent(route.externalRef)}`;
  }
}

const SESSION_KEY = "colabel.session";

export function loadSession(storage: Storage): Session | null {
  const raw = storage.getItem(SESSION_KEY);
  if (!raw) return null;
  try {
    return JSON.parse(raw) as Session;
  } catch {
    return null;
  }
}

export function saveSession(storage: Storage, session: Session): void {
  storage.setItem(SESSION_KEY, JSON.stringify(session));
}
