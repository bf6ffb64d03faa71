/** Talk thread view: topics with one level of reply nesting, post forms. */

import { ApiClient } from "../api.js";
import { el, formatTimestamp } from "../dom.js";
import type { Post, TalkThread } from "../types.js";

export interface TalkViewOptions {
  api: ApiClient;
  campaignId: string;
  entityId: string | null;
  thread: TalkThread;
  onPosted?: () => void;
}

function postNode(post: Post, replies: Post[], onReply: (parent: Post) => void): HTMLElement {
  const node = el("div", { class: "post", "data-post": post.id });
  node.append(
    el("div", { class: "post-meta" }, [`${post.author} · ${formatTimestamp(post.timestamp)}`]),
    el("p", { class: "post-body" }, [post.body]),
  );
  const replyButton = el("button", { type: "button", class: "reply" }, ["Reply"]);
  replyButton.addEventListener("click", () => onReply(post));
  node.append(replyButton);
  for (const reply of replies) {
    const child = el("div", { class: "post reply-post", "data-post": reply.id });
    child.append(
      el("div", { class: "post-meta" }, [`${reply.author} · ${formatTimestamp(reply.timestamp)}`]),
      el("p", { class: "post-body" }, [reply.body]),
    );
    node.append(child);
  }
  return node;
}

export function renderTalkView(options: TalkViewOptions): HTMLElement {
  const root = el("section", { class: "talk" });
  root.append(
    el("h3", {}, [options.entityId ? "Entity talk" : "Campaign talk"]),
  );

  for (const topic of options.thread.topics) {
    const section = el("section", { class: "topic", "data-topic": topic.title });
    section.append(el("h4", {}, [topic.title]));
    const roots = topic.posts.filter((p) => p.parent === null);
    for (const post of roots) {
      const replies = topic.posts.filter((p) => p.parent === post.id);
      section.append(
        postNode(post, replies, (parent) => {
          const body = prompt("Reply:");
          if (body) {
            void options.api
              .postToTalk(options.campaignId, options.entityId, topic.title, body, parent.id)
              .then(() => options.onPosted?.());
          }
        }),
      );
    }
    root.append(section);
  }

  const form = el("form", { class: "new-topic" });
  const title = el("input", { type: "text", placeholder: "topic title", class: "topic-title" });
  const body = el("textarea", { placeholder: "what do you want to discuss?", class: "topic-body" });
  const submit = el("button", { type: "submit" }, ["Post"]);
  form.append(el("label", {}, ["Topic", title]), el("label", {}, ["Post", body]), submit);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    if (!title.value || !body.value) return;
    void options.api
      .postToTalk(options.campaignId, options.entityId, title.value, body.value)
      .then(() => options.onPosted?.());
  });
  root.append(form);
  return root;
}
