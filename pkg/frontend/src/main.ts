/** Application entry: session bootstrap, routing, view mounting. */

import { ApiClient } from "./api.js";
import { clear, el } from "./dom.js";
import { loadSession, parseRoute, Route, saveSession, ViewState } from "./state.js";
import { renderDashboard } from "./views/dashboard.js";
import { renderEntityPage } from "./views/entityPage.js";
import { renderEvalReport } from "./views/evalReport.js";
import { renderLabelPanel } from "./views/labelPanel.js";
import { renderNotifications } from "./views/notifications.js";
import { renderTalkView } from "./views/talk.js";

const api = new ApiClient("");
const state: ViewState = {
  session: null,
  activeCampaign: null,
  route: { kind: "campaigns" },
};

function mount(): HTMLElement {
  return document.getElementById("app") as HTMLElement;
}

async function ensureSession(): Promise<void> {
  const existing = loadSession(window.localStorage);
  if (existing) {
    state.session = existing;
    api.token = existing.token;
    return;
  }
  const name = prompt("Pick a display name to start contributing:") ?? "anonymous";
  const session = await api.register(name);
  saveSession(window.localStorage, session);
  state.session = session;
  api.token = session.token;
}

async function render(route: Route): Promise<void> {
  const app = mount();
  clear(app);
  state.route = route;
  switch (route.kind) {
    case "campaigns": {
      const campaigns = await api.listCampaigns();
      const list = el("ul", { class: "campaign-list" });
      for (const campaign of campaigns) {
        list.append(
          el("li", {}, [
            el("a", { href: `#/campaign/${campaign.id}` }, [
              `${campaign.name} (${campaign.n_entities} entities)`,
            ]),
          ]),
        );
      }
      app.append(el("h2", {}, ["Campaigns"]), list);
      break;
    }
    case "dashboard": {
      state.activeCampaign = route.campaignId;
      const [detail, stats] = await Promise.all([
        api.campaignDetail(route.campaignId),
        api.campaignStats(route.campaignId),
      ]);
      app.append(renderDashboard({ api, detail, stats }));
      break;
    }
    case "entity": {
      state.activeCampaign = route.campaignId;
      const [detail, view] = await Promise.all([
        api.campaignDetail(route.campaignId),
        api.entityView(route.campaignId, route.entityId),
      ]);
      app.append(
        renderEntityPage({
          api,
          campaignId: route.campaignId,
          dimensions: detail.schema.dimensions,
          view,
          onChanged: () => void render(route),
        }),
      );
      break;
    }
    case "entity-talk": {
      const thread = await api.entityTalk(route.campaignId, route.entityId);
      app.append(
        renderTalkView({
          api,
          campaignId: route.campaignId,
          entityId: route.entityId,
          thread,
          onPosted: () => void render(route),
        }),
      );
      break;
    }
    case "campaign-talk": {
      const thread = await api.campaignTalk(route.campaignId);
      app.append(
        renderTalkView({
          api,
          campaignId: route.campaignId,
          entityId: null,
          thread,
          onPosted: () => void render(route),
        }),
      );
      break;
    }
    case "eval": {
      app.append(
        el("p", { class: "hint" }, [
          "Paste a prediction file (JSONL: header line, then {ref, score} lines).",
        ]),
      );
      const input = el("textarea", { class: "prediction-input" });
      const run = el("button", { type: "button" }, ["Evaluate"]);
      const out = el("div", { class: "eval-output" });
      run.addEventListener("click", () => {
        void (async () => {
          const lines = input.value.split("\n").filter((l) => l.trim());
          const header = JSON.parse(lines[0]) as {
            model: string;
            dimension: string;
            positive_means: string;
          };
          const scores: Record<string, number> = {};
          for (const line of lines.slice(1)) {
            const record = JSON.parse(line) as { ref: string; score: number };
            scores[record.ref] = record.score;
          }
          const comparison = await api.evaluate(route.campaignId, header.dimension, [
            { model: header.model, positive_means: header.positive_means, scores },
          ]);
          clear(out);
          out.append(renderEvalReport(comparison));
        })();
      });
      app.append(input, run, out);
      break;
    }
    case "notifications": {
      const inbox = await api.notifications();
      app.append(
        renderNotifications({
          api,
          campaignId: state.activeCampaign,
          notifications: inbox,
          onChanged: () => void render(route),
        }),
      );
      break;
    }
    case "quick-label": {
      const detail = await api.campaignDetail(route.campaignId);
      app.append(
        el("h2", {}, [`Label ${route.externalRef}`]),
        renderLabelPanel({
          api,
          campaignId: route.campaignId,
          dimensions: detail.schema.dimensions,
          entityId: null,
          externalRef: route.externalRef,
          talkHref: (entityId) => `#/campaign/${route.campaignId}/entity/${entityId}/talk`,
        }),
      );
      break;
    }
  }
}

async function start(): Promise<void> {
  await ensureSession();
  window.addEventListener("hashchange", () => {
    void render(parseRoute(window.location.hash));
  });
  await render(parseRoute(window.location.hash));
}

void start();
