import { describe, expect, it } from 'vitest';

import type { QueueCandidate } from '../src/api.js';
import { escapeHtml, renderCandidateRow, renderClusters, renderError, renderQueue } from '../src/render.js';
import { dirFor, isRtlText } from '../src/rtl.js';

const SYRIAC = 'ܢܪܣܝܐ ܥܠ ܡܪܝܡ';

function candidate(overrides: Partial<QueueCandidate> = {}): QueueCandidate {
  return {
    candidate_id: 'c1',
    left: 'stub-1',
    right: 'http://syriaca.org/work/270',
    score: 0.6875,
    features: { title_sim: 0.5, author_match: 1 },
    band: 'review',
    decision: null,
    left_context: {
      kind: 'stub',
      titles: [{ lang: 'syr', text: SYRIAC }],
      authors: [{ uri: 'http://syriaca.org/person/650', name: 'Narsai' }],
      incipit: { lang: 'syr', text: SYRIAC },
      source_ms: { uri: 'http://syriaca.org/manuscript/20001', locus_from: '1', locus_to: '23' },
      provenance: 'demo',
    },
    right_context: {
      kind: 'work',
      titles: [{ lang: 'en', text: 'History of the <Martyrs> & others' }],
      authors: [],
      incipit: null,
    },
    ...overrides,
  };
}

describe('rtl helpers', () => {
  it('detects Syriac script', () => {
    expect(isRtlText(SYRIAC)).toBe(true);
    expect(isRtlText('plain latin')).toBe(false);
    expect(isRtlText('123 plain')).toBe(false);
  });

  it('prefers the language tag when present', () => {
    expect(dirFor('syr', 'transliterated latin')).toBe('rtl');
    expect(dirFor('syr-Syrn', SYRIAC)).toBe('rtl');
    expect(dirFor('en', SYRIAC)).toBe('ltr');
    expect(dirFor(null, SYRIAC)).toBe('rtl');
    expect(dirFor(null, 'latin')).toBe('ltr');
  });
});

describe('renderCandidateRow', () => {
  it('marks Syriac strings rtl and escapes markup', () => {
    const html = renderCandidateRow(candidate(), { selected: false, pending: false, rowError: null });
    expect(html).toContain(`dir="rtl"`);
    expect(html).toContain('lang="syr"');
    expect(html).toContain('History of the &lt;Martyrs&gt; &amp; others');
    expect(html).not.toContain('<Martyrs>');
  });

  it('shows every scored field from the response', () => {
    const html = renderCandidateRow(candidate(), { selected: false, pending: false, rowError: null });
    expect(html).toContain('0.688'); // score, 3 decimals
    expect(html).toContain('title_sim=0.50');
    expect(html).toContain('author_match=1.00');
    expect(html).toContain('review');
  });

  it('renders the standing decision, pending state, and inline errors', () => {
    const decided = renderCandidateRow(
      candidate({ decision: { verdict: 'accept', editor: 'ed1', timestamp: 't' } }),
      { selected: false, pending: false, rowError: null },
    );
    expect(decided).toContain('accept · ed1');

    const pending = renderCandidateRow(candidate(), { selected: true, pending: true, rowError: null });
    expect(pending).toContain('saving…');
    expect(pending).toContain('selected');

    const conflicted = renderCandidateRow(candidate(), {
      selected: false,
      pending: false,
      rowError: 'DECISION_CONFLICT: already ruled',
    });
    expect(conflicted).toContain('row-error');
    expect(conflicted).toContain('DECISION_CONFLICT');
  });
});

describe('renderQueue / renderClusters / renderError', () => {
  it('renders an empty state', () => {
    expect(renderQueue([], 0, new Set(), new Map())).toContain('Queue is empty');
    expect(renderClusters([], new Set())).toContain('No clusters yet');
  });

  it('lists merged clusters and highlights the selected pair', () => {
    const html = renderClusters(
      [
        { cluster_id: 'a', members: ['a', 'b'] },
        { cluster_id: 'c', members: ['c'] },
      ],
      new Set(['a']),
    );
    expect(html).toContain('member highlight');
    expect(html).toContain('1 merged cluster(s), 1 singleton(s)');
  });

  it('error banner offers a retry action', () => {
    const html = renderError('fetch failed');
    expect(html).toContain('data-action="retry"');
    expect(html).toContain('fetch failed');
  });

  it('escapeHtml covers the dangerous four', () => {
    expect(escapeHtml(`<a href="x">&</a>`)).toBe('&lt;a href=&quot;x&quot;&gt;&amp;&lt;/a&gt;');
  });
});
