/**
 * Thin typed client over the HTTP/JSON surface.
 *
 * All state changes flow through here; a pluggable fetch implementation
 * lets the contract tests run against an in-memory fixture server.
 */

import type {
  CampaignDetail,
  CampaignStats,
  CampaignSummary,
  Envelope,
  EntityView,
  LabelValue,
  ModelComparison,
  Notification,
  PrimaryLabel,
  Session,
  SortMode,
  SubmitOutcome,
  TableRow,
  TalkThread,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiRequestError extends Error {
  constructor(
    public code: string,
    message: string,
    public status: number,
    public payload: Record<string, unknown> = {},
  ) {
    super(message);
  }
}

export class ApiClient {
  token: string | null = null;

  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = { "content-type": "application/json" };
    if (this.token) headers["authorization"] = `Bearer ${this.token}`;
    const response = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const envelope = (await response.json()) as Envelope<T>;
    if (!envelope.ok || envelope.data === undefined) {
      const err = envelope.error ?? { code: "unknown", message: "request failed" };
      throw new ApiRequestError(err.code, err.message, response.status, err as never);
    }
    return envelope.data;
  }

  register(displayName: string): Promise<Session> {
    return this.request<Session>("POST", "/users", { display_name: displayName });
  }

  listCampaigns(): Promise<CampaignSummary[]> {
    return this.request("GET", "/campaigns");
  }

  campaignDetail(campaignId: string): Promise<CampaignDetail> {
    return this.request("GET", `/campaigns/${campaignId}`);
  }

  campaignStats(campaignId: string): Promise<CampaignStats> {
    return this.request("GET", `/campaigns/${campaignId}/stats`);
  }

  table(campaignId: string, sort: SortMode, page = 1, pageSize = 50): Promise<TableRow[]> {
    return this.request(
      "GET",
      `/campaigns/${campaignId}/table?sort=${sort}&page=${page}&page_size=${pageSize}`,
    );
  }

  entityView(campaignId: string, entityId: string): Promise<EntityView> {
    return this.request("GET", `/campaigns/${campaignId}/entities/${entityId}`);
  }

  submitLabel(
    campaignId: string,
    entityId: string,
    values: LabelValue[],
    note: string | null,
  ): Promise<SubmitOutcome> {
    return this.request("POST", `/campaigns/${campaignId}/entities/${entityId}/labels`, {
      values,
      note,
    });
  }

  quickLabel(
    campaignId: string,
    externalRef: string,
    values: LabelValue[],
    note: string | null,
  ): Promise<SubmitOutcome> {
    return this.request("POST", "/quick-label", {
      campaign: campaignId,
      external_ref: externalRef,
      values,
      note,
    });
  }

  /** Compare-and-set primary edit; carries the revision token it rendered from. */
  editPrimary(
    campaignId: string,
    entityId: string,
    values: Record<string, string>,
    baseRevision: number,
    rationale: string | null,
  ): Promise<PrimaryLabel> {
    return this.request("PUT", `/campaigns/${campaignId}/entities/${entityId}/primary`, {
      values,
      base_revision: baseRevision,
      rationale,
    });
  }

  entityTalk(campaignId: string, entityId: string): Promise<TalkThread> {
    return this.request("GET", `/campaigns/${campaignId}/entities/${entityId}/talk`);
  }

  campaignTalk(campaignId: string): Promise<TalkThread> {
    return this.request("GET", `/campaigns/${campaignId}/talk`);
  }

  postToTalk(
    campaignId: string,
    entityId: string | null,
    topic: string,
    body: string,
    parent: string | null = null,
  ): Promise<{ post_id: string }> {
    const path =
      entityId === null
        ? `/campaigns/${campaignId}/talk`
        : `/campaigns/${campaignId}/entities/${entityId}/talk`;
    return this.request("POST", path, { topic, body, parent });
  }

  editDatasheet(campaignId: string, section: string, text: string): Promise<unknown> {
    return this.request(
      "PUT",
      `/campaigns/${campaignId}/datasheet/${encodeURIComponent(section)}`,
      { text },
    );
  }

  notifications(unreadOnly = false): Promise<Notification[]> {
    return this.request("GET", `/notifications?unread_only=${unreadOnly}`);
  }

  markNotificationsRead(ids: string[] | null = null): Promise<{ marked: number }> {
    return this.request("POST", "/notifications/read", ids ? { ids } : {});
  }

  evaluate(
    campaignId: string,
    dimension: string,
    predictions: { model: string; positive_means: string; scores: Record<string, number> }[],
  ): Promise<ModelComparison> {
    return this.request("POST", `/campaigns/${campaignId}/evaluate`, {
      dimension,
      predictions,
    });
  }
}
