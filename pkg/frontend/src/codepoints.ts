/**
 * Code-point arithmetic over JS strings.
 *
 * Span indices everywhere in this system count Unicode code points, but JS
 * strings index UTF-16 units (astral characters take two). Every place that
 * touches a span boundary must go through these helpers, never .length or
 * .slice directly.
 */

export function cpLength(text: string): number {
  let count = 0;
  for (let i = 0; i < text.length; i++) {
    count++;
    const code = text.charCodeAt(i);
    if (code >= 0xd800 && code <= 0xdbff && i + 1 < text.length) {
      const next = text.charCodeAt(i + 1);
      if (next >= 0xdc00 && next <= 0xdfff) i++;
    }
  }
  return count;
}

/** UTF-16 index of the given code-point index (clamped to text end). */
export function cpToUtf16(text: string, cpIndex: number): number {
  let cp = 0;
  let i = 0;
  while (i < text.length && cp < cpIndex) {
    const code = text.codePointAt(i)!;
    i += code > 0xffff ? 2 : 1;
    cp++;
  }
  return i;
}

/** Code-point index of the given UTF-16 index (boundary-snapped downward). */
export function utf16ToCp(text: string, utf16Index: number): number {
  let cp = 0;
  let i = 0;
  while (i < text.length && i < utf16Index) {
    const code = text.codePointAt(i)!;
    i += code > 0xffff ? 2 : 1;
    cp++;
  }
  return cp;
}

/** Code-point slice [start, end), the JS mirror of server-side extraction. */
export function cpSlice(text: string, start: number, end: number): string {
  return text.slice(cpToUtf16(text, start), cpToUtf16(text, end));
}

export function cpConcat(parts: string[]): string {
  return parts.join("");
}
