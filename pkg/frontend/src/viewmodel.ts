/** Pure derivations from service responses to what the screen shows.
 * No firing logic lives here: everything is a function of the last
 * payload received, so the view can never drift from the service. */

import type {
  ChoiceInfo,
  ReplayResponse,
  ReplayState,
  SessionState,
  TransitionInfo,
} from './types.js';

export interface ChoiceOption {
  positions: number[];
  /** One human label per chosen position, e.g. "via t1" or "initial token". */
  labels: string[];
}

export function choiceLabel(provenance: string[]): string {
  if (provenance.length === 0) return 'initial token';
  return `via ${provenance[provenance.length - 1]}`;
}

export function choiceOptions(t: TransitionInfo): ChoiceOption[] {
  return t.choices.map((c: ChoiceInfo) => ({
    positions: c.positions,
    labels: c.provenance.map(choiceLabel),
  }));
}

/** Firing needs a dialog only when there is a real decision to make. */
export function needsChoiceDialog(t: TransitionInfo): boolean {
  return t.enabled && t.choices.length > 1;
}

export interface MarkingBadge {
  place: string;
  count: number;
}

export function markingBadges(state: SessionState): MarkingBadge[] {
  return state.places.map((place) => ({
    place,
    count: state.marking[place] ?? 0,
  }));
}

export function enabledNames(state: SessionState): string[] {
  return state.transitions.filter((t) => t.enabled).map((t) => t.name);
}

export function logLines(state: SessionState): string[] {
  return state.log.map(
    (e, i) => `${i + 1}. ${e.transition} @ [${e.choice.join(', ')}]`,
  );
}

export interface ReplayRow {
  transition: string;
  cells: { place: string; count: number; negative: boolean }[];
  legal: boolean;
}

export function replayRows(rep: ReplayResponse): ReplayRow[] {
  return rep.states.map((s: ReplayState) => ({
    transition: s.transition,
    cells: Object.entries(s.marking).map(([place, count]) => ({
      place,
      count,
      negative: count < 0,
    })),
    legal: s.legal,
  }));
}

export function legalizeSummary(rep: ReplayResponse): string {
  if (rep.legalized === null) return 'no legal reordering exists';
  return rep.legalized.join(', ');
}
