/** Wire types mirroring the stepping service's JSON payloads. */

export interface ChoiceInfo {
  positions: number[];
  /** Per chosen position: the firing log of the token at that position. */
  provenance: string[][];
}

export interface TransitionInfo {
  id: number;
  name: string;
  input: Record<string, number>;
  output: Record<string, number>;
  enabled: boolean;
  choices: ChoiceInfo[];
}

export interface LogEntry {
  generator: number;
  transition: string;
  choice: number[];
}

export interface SessionState {
  id: string;
  marking: Record<string, number>;
  current: number[];
  places: string[];
  transitions: TransitionInfo[];
  log: LogEntry[];
}

export interface PresentationInfo {
  objects: number;
  generators: { label: number; source: number[]; target: number[] }[];
  pnz: string;
}

export type CreateResponse = SessionState & { presentation: PresentationInfo };

export type DiagramLink =
  | { kind: 'input'; index: number }
  | { kind: 'box'; box: number; port: number };

export interface DiagramBox {
  label: number;
  name: string;
  inputs: DiagramLink[];
  arity_out: number;
}

export interface DiagramJson {
  dom: number[];
  cod: number[];
  boxes: DiagramBox[];
  outputs: DiagramLink[];
}

export interface HistoryResponse {
  term: string;
  initial: number[];
  current: number[];
  log: { generator: number; choice: number[] }[];
  diagram: DiagramJson;
  token_histories: number[][];
}

export interface AnalysisReport {
  safe?: boolean;
  bounds?: Record<string, number | null>;
  deadlock?: { path: string[] } | null;
  liveness?: Record<string, string>;
  mutual_exclusion?: { status: string; counterexample: string[] | null };
  [key: string]: unknown;
}

export interface ReplayState {
  transition: string;
  marking: Record<string, number>;
  legal: boolean;
}

export interface ReplayResponse {
  states: ReplayState[];
  final_legal: boolean;
  legalized: string[] | null;
}
