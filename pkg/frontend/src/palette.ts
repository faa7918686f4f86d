/**
 * Category colors. Fixed and vibrant so annotators can bind color to
 * category at a glance; must stay identical to fixtures/palette.json, which
 * the contract test enforces.
 */

import { canonicalCategory } from "./validation.js";

export const PALETTE: Record<string, string> = {
  Addition: "#2ea043",
  Omission: "#e5534b",
  Mistranslation: "#d29922",
  Untranslated: "#58a6ff",
  Grammar: "#bc8cff",
  Spelling: "#39c5cf",
  Typography: "#ff7eb6",
  Unintelligible: "#f0883e",
};

export function colorFor(category: string): string {
  const canonical = canonicalCategory(category);
  return (canonical && PALETTE[canonical]) || "#8b949e";
}
