/**
 * Payload types mirroring the server's JSON surface.
 *
 * Every numeric statistic shown in the UI (disagreement, AUC, fractions)
 * arrives precomputed from the server; the client never recomputes them.
 */

export interface Envelope<T> {
  ok: boolean;
  data?: T;
  error?: ApiError;
}

export interface ApiError {
  code: string;
  message: string;
  current_revision?: number;
  current_values?: Record<string, string>;
  existing_id?: string;
}

export interface Session {
  user_id: string;
  display_name: string;
  token: string;
}

export interface LabelValue {
  dimension: string;
  choice: "positive" | "negative";
  confidence: "high" | "low";
}

export interface IndividualLabel {
  author: string;
  entity: string;
  values: LabelValue[];
  note: string | null;
  created_at: number;
  updated_at: number;
}

export interface PrimaryRevision {
  revision: number;
  values: Record<string, string>;
  editor: string;
  timestamp: number;
  rationale: string | null;
}

export interface PrimaryLabel {
  entity: string;
  values: Record<string, string>;
  revision: number;
  history: PrimaryRevision[];
}

export interface EntityInfo {
  id: string;
  external_ref: string;
  content_snapshot: string;
  added_by: string;
  added_at: number;
  excluded: boolean;
  exclusion_reason: string | null;
}

export interface EntityView {
  entity: EntityInfo;
  primary: PrimaryLabel | null;
  labels: IndividualLabel[];
  own_label: IndividualLabel | null;
  has_discussion: boolean;
  requires_acknowledgement: boolean;
  acknowledgement_text: string;
}

export interface SubmitOutcome {
  status: "recorded_agree" | "recorded_disagree_nudge";
  entity_link: string;
  primary_snapshot: Record<string, string>;
  entity_id?: string;
}

export interface TableRow {
  entity_id: string;
  external_ref: string;
  primary_values: Record<string, string> | null;
  n_labels: number;
  disagreement: number;
  has_discussion: boolean;
  differs_from_viewer: boolean;
  last_activity: number;
}

export type SortMode =
  | "fewest_labels"
  | "highest_disagreement"
  | "differs_from_mine"
  | "recent_activity";

export interface DimensionSchema {
  name: string;
  positive_value: string;
  negative_value: string;
  definition_text: { revisions: TextRevision[] };
}

export interface TextRevision {
  revision: number;
  text: string;
  author: string;
  timestamp: number;
}

export interface CampaignDetail {
  id: string;
  name: string;
  dimensions: string[];
  thresholds: number[];
  n_entities: number;
  n_excluded: number;
  schema: { dimensions: DimensionSchema[] };
  datasheet: { sections: { name: string; history: { revisions: TextRevision[] } }[] };
}

export interface CampaignSummary {
  id: string;
  name: string;
  dimensions: string[];
  n_entities: number;
  n_excluded: number;
}

export interface Post {
  id: string;
  author: string;
  body: string;
  timestamp: number;
  parent: string | null;
}

export interface TalkThread {
  scope: string;
  topics: { title: string; posts: Post[] }[];
}

export interface Notification {
  id: string;
  recipient: string;
  entity: string;
  kind: "primary_changed" | "mentioned";
  old_values: Record<string, string> | null;
  new_values: Record<string, string> | null;
  created_at: number;
  read: boolean;
}

export interface EntityStatsRow {
  entity: string;
  n_labels: number;
  disagreement: Record<string, number>;
  low_conf_fraction: Record<string, number>;
  quadrant: Record<string, string>;
}

export interface CampaignStats {
  entities: EntityStatsRow[];
  primary_counts: Record<string, Record<string, number>>;
  primary_fractions: Record<string, Record<string, number>>;
  contributions: Record<string, number>;
  n_entities: number;
  n_with_primary: number;
}

export interface RocPoint {
  fpr: number;
  tpr: number;
  threshold: number | null;
}

export interface EvaluationReport {
  model: string;
  dimension: string;
  n: number;
  roc_points: RocPoint[];
  auc: number | null;
  auc_defined: boolean;
  best_threshold: number;
  best_accuracy: number;
  confusion: { tp: number; fp: number; tn: number; fn: number };
  skipped_refs: string[];
  unresolved_refs: string[];
  quadrant_breakdown: { quadrant: string; n: number; errors: number; error_rate: number }[];
}

export interface ModelComparison {
  dimension: string;
  reports: EvaluationReport[];
  entities: unknown[];
}
