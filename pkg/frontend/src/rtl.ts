// Text-direction helpers. Syriac-script strings must render right-to-left;
// the CSS pairs [dir="rtl"] with a Syriac font fallback stack.

const RTL_SCRIPT_RANGES: Array<[number, number]> = [
  [0x0590, 0x05ff], // Hebrew
  [0x0600, 0x06ff], // Arabic
  [0x0700, 0x074f], // Syriac
  [0x0750, 0x077f], // Arabic Supplement
  [0x0860, 0x086f], // Syriac Supplement
];

const RTL_LANG_PREFIXES = ['syr', 'syc', 'ar', 'he', 'arc'];

/** True when the first strong character belongs to an RTL script block. */
export function isRtlText(text: string): boolean {
  for (const ch of text) {
    const cp = ch.codePointAt(0)!;
    if (RTL_SCRIPT_RANGES.some(([lo, hi]) => cp >= lo && cp <= hi)) return true;
    // any ASCII letter settles direction as LTR
    if ((cp >= 0x41 && cp <= 0x5a) || (cp >= 0x61 && cp <= 0x7a)) return false;
  }
  return false;
}

function isRtlLang(lang: string | null): boolean {
  if (!lang) return false;
  const primary = lang.toLowerCase().split('-')[0];
  return RTL_LANG_PREFIXES.includes(primary);
}

/**
 * Direction attribute for a piece of text: the language tag decides when
 * present, otherwise the script of the first strong character does.
 */
export function dirFor(lang: string | null, text: string): 'rtl' | 'ltr' {
  if (lang) return isRtlLang(lang) ? 'rtl' : 'ltr';
  return isRtlText(text) ? 'rtl' : 'ltr';
}
