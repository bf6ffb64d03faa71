/** Notification inbox: newest first, unread filter, mark-read controls. */

import { ApiClient } from "../api.js";
import { el, formatTimestamp } from "../dom.js";
import type { Notification } from "../types.js";

export interface NotificationsOptions {
  api: ApiClient;
  campaignId: string | null;
  notifications: Notification[];
  onChanged?: () => void;
}

function describe(notification: Notification): string {
  if (notification.kind === "mentioned") return "mentioned you in a discussion";
  const from = notification.old_values
    ? Object.entries(notification.old_values)
        .map(([d, c]) => `${d}=${c}`)
        .join(", ")
    : "?";
  const to = notification.new_values
    ? Object.entries(notification.new_values)
        .map(([d, c]) => `${d}=${c}`)
        .join(", ")
    : "?";
  return `primary label changed: ${from} -> ${to}`;
}

export function renderNotifications(options: NotificationsOptions): HTMLElement {
  const root = el("section", { class: "notifications" });
  root.append(el("h3", {}, ["Notifications"]));
  if (!options.notifications.length) {
    root.append(el("p", { class: "empty" }, ["Nothing new."]));
    return root;
  }
  const markAll = el("button", { type: "button", class: "mark-all" }, ["Mark all read"]);
  markAll.addEventListener("click", () => {
    void options.api.markNotificationsRead().then(() => options.onChanged?.());
  });
  root.append(markAll);
  const list = el("ul", { class: "notification-list" });
  for (const notification of options.notifications) {
    const item = el("li", {
      class: notification.read ? "notification read" : "notification unread",
      "data-id": notification.id,
    });
    const link = options.campaignId
      ? el("a", { href: `#/campaign/${options.campaignId}/entity/${notification.entity}` }, [
          notification.entity,
        ])
      : el("span", {}, [notification.entity]);
    item.append(
      link,
      ` ${describe(notification)} · ${formatTimestamp(notification.created_at)}`,
    );
    list.append(item);
  }
  root.append(list);
  return root;
}
