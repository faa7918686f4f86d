"""Prompt construction for LLM-backed error detection."""

from __future__ import annotations

from ..spans import ErrorCategory, Severity, TranslationPair

_SCHEMA_EXAMPLE = """\
{
  "error_spans": [
    {
      "original_text": "<exact source substring containing the error>",
      "error_type": "<one of the categories above>",
      "error_severity": "<Minor or Major>",
      "start_index_orig": 0,
      "end_index_orig": 0,
      "start_index_translation": 0,
      "end_index_translation": 0,
      "correct_text": "<brief explanation of the error>"
    }
  ]
}"""


def build_ec1_prompt(pair: TranslationPair) -> str:
    """Deterministic detection prompt for one source/MT pair.

    Everything a grader of engine output relies on is stated explicitly:
    the category taxonomy, the two severities, non-overlap, 0-based
    exclusive-end indexing, and the exact response schema.
    """
    categories = ", ".join(c.value for c in ErrorCategory)
    severities = " or ".join(s.value for s in Severity)
    return (
        "You are a professional linguist specializing in machine translation "
        "evaluation.\n"
        "Given a source sentence and its machine translation, detect "
        "fine-grained translation errors.\n"
        "\n"
        f"Label each error with exactly one category: {categories}.\n"
        f"Assign each error a severity level: {severities}.\n"
        "\n"
        "Rules:\n"
        "- Report precise, non-overlapping character-level spans in both the "
        "source text and the translation.\n"
        "- Use strict 0-based character indexing; end indices are exclusive.\n"
        "- Count characters as Unicode code points.\n"
        "- Justify each detected error with a brief explanation in "
        "correct_text.\n"
        "- If the translation is error-free, return an empty error_spans "
        "array.\n"
        "\n"
        "Respond with JSON only, matching exactly this schema:\n"
        f"{_SCHEMA_EXAMPLE}\n"
        "\n"
        f'Source: "{pair.source_text}"\n'
        f'MT: "{pair.mt_text}"\n'
    )
