// Pure HTML renderers: every number and string shown comes straight from an
// API response field. Keeping these as string-producing functions makes the
// view testable without a browser.

import type { Cluster, QueueCandidate, SideContext } from './api.js';
import { dirFor } from './rtl.js';

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

function textSpan(lang: string | null, text: string, cls = ''): string {
  const dir = dirFor(lang, text);
  const langAttr = lang ? ` lang="${escapeHtml(lang)}"` : '';
  const classAttr = cls ? ` class="${cls}"` : '';
  return `<span${classAttr}${langAttr} dir="${dir}">${escapeHtml(text)}</span>`;
}

function renderSide(ctx: SideContext, id: string): string {
  const titles = ctx.titles.length
    ? ctx.titles
        .map((t) => `<li>${textSpan(t.lang, t.text)}${t.lang ? ` <small>[${escapeHtml(t.lang)}]</small>` : ''}</li>`)
        .join('')
    : '<li class="muted">no titles</li>';
  const authors = ctx.authors.length
    ? ctx.authors
        .map((a) => {
          const name = a.name ? escapeHtml(a.name) : '<span class="muted">unnamed</span>';
          return a.uri ? `${name} <small>${escapeHtml(a.uri)}</small>` : name;
        })
        .join('; ')
    : '<span class="muted">none</span>';
  const incipit = ctx.incipit
    ? textSpan(ctx.incipit.lang, ctx.incipit.text, 'incipit')
    : '<span class="muted">none</span>';
  const source = ctx.source_ms
    ? `${escapeHtml(ctx.source_ms.uri)}${ctx.source_ms.locus_from ? ` ff. ${escapeHtml(ctx.source_ms.locus_from)}${ctx.source_ms.locus_to ? '-' + escapeHtml(ctx.source_ms.locus_to) : ''}` : ''}`
    : null;
  return `<div class="side">
    <h4 class="side-id">${escapeHtml(id)} <small>(${ctx.kind})</small></h4>
    <ul class="titles">${titles}</ul>
    <p><strong>author</strong> ${authors}</p>
    <p><strong>incipit</strong> ${incipit}</p>
    ${source ? `<p><strong>ms</strong> ${source}</p>` : ''}
    ${ctx.provenance ? `<p class="muted">${escapeHtml(ctx.provenance)}</p>` : ''}
  </div>`;
}

export interface RowFlags {
  selected: boolean;
  pending: boolean;
  rowError: string | null;
}

export function renderCandidateRow(c: QueueCandidate, flags: RowFlags): string {
  const score = c.score === null ? '—' : c.score.toFixed(3);
  const features = Object.entries(c.features)
    .map(([k, v]) => `${escapeHtml(k)}=${v.toFixed(2)}`)
    .join(' ');
  const decision = c.decision
    ? `<span class="chip ${c.decision.verdict}">${c.decision.verdict} · ${escapeHtml(c.decision.editor)}</span>`
    : flags.pending
      ? '<span class="chip pending">saving…</span>'
      : '<span class="chip open">undecided</span>';
  const classes = ['candidate', flags.selected ? 'selected' : '', c.band ?? ''].filter(Boolean).join(' ');
  return `<article class="${classes}" data-candidate="${escapeHtml(c.candidate_id)}">
    <header>
      <span class="score">${score}</span>
      <span class="band">${c.band ?? ''}</span>
      <span class="features">${features}</span>
      ${decision}
    </header>
    ${flags.rowError ? `<p class="row-error">${escapeHtml(flags.rowError)}</p>` : ''}
    <div class="pair">
      ${renderSide(c.left_context, c.left)}
      ${renderSide(c.right_context, c.right)}
    </div>
  </article>`;
}

export function renderQueue(
  candidates: QueueCandidate[],
  selectedIndex: number,
  pendingIds: ReadonlySet<string>,
  rowErrors: ReadonlyMap<string, string>,
): string {
  if (candidates.length === 0) {
    return '<p class="empty">Queue is empty: no candidates match the current filters.</p>';
  }
  return candidates
    .map((c, i) =>
      renderCandidateRow(c, {
        selected: i === selectedIndex,
        pending: pendingIds.has(c.candidate_id),
        rowError: rowErrors.get(c.candidate_id) ?? null,
      }),
    )
    .join('\n');
}

export function renderClusters(clusters: Cluster[], highlight: ReadonlySet<string>): string {
  if (clusters.length === 0) {
    return '<p class="empty">No clusters yet.</p>';
  }
  const multi = clusters.filter((c) => c.members.length > 1);
  const single = clusters.length - multi.length;
  const items = multi
    .map((c) => {
      const members = c.members
        .map((m) => `<span class="member${highlight.has(m) ? ' highlight' : ''}">${escapeHtml(m)}</span>`)
        .join(' + ');
      return `<li>${members}</li>`;
    })
    .join('');
  return `<ul class="clusters">${items}</ul>
  <p class="muted">${multi.length} merged cluster(s), ${single} singleton(s).</p>`;
}

export function renderError(message: string): string {
  return `<div class="banner error">
    <span>${escapeHtml(message)}</span>
    <button type="button" data-action="retry">Retry</button>
  </div>`;
}

export function renderStatus(total: number, offset: number, shown: number): string {
  if (total === 0) return '';
  return `${offset + 1}–${offset + shown} of ${total}`;
}
