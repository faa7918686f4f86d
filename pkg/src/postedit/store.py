"""Document store for pairs, annotations, and detection results.

Two backends behind one class: in-memory, and a single JSON file that
persists every mutation atomically (write temp + rename). Values are
immutable dataclasses, so reads are plain lock-free snapshots; all writes
serialize through one lock, which subsumes per-pair mutual exclusion.
Annotation writes are compare-and-swap on the stored version.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import threading
from dataclasses import dataclass, replace
from datetime import datetime, timezone

from .detection.sanitize import SanitizationReport
from .spans import (
    Annotation,
    AnnotationInvalidError,
    ErrorSpan,
    PairStatus,
    TranslationPair,
    status_can_advance,
    validate_annotation,
)


class StoreError(Exception):
    pass


class PairConflictError(StoreError):
    def __init__(self, pair_ids: list[str]):
        self.pair_ids = pair_ids
        super().__init__(f"pair ids already exist with different content: {', '.join(pair_ids)}")


class UnknownPairError(StoreError):
    def __init__(self, pair_id: str):
        self.pair_id = pair_id
        super().__init__(f"no pair {pair_id!r}")


class UnknownDatasetError(StoreError):
    def __init__(self, dataset_id: str):
        self.dataset_id = dataset_id
        super().__init__(f"no dataset {dataset_id!r}")


class VersionConflictError(StoreError):
    def __init__(self, current_version: int, expected_version: int):
        self.current_version = current_version
        self.expected_version = expected_version
        super().__init__(
            f"expected version {expected_version} but store holds {current_version}"
        )


def pair_snapshot_hash(pair: TranslationPair) -> str:
    """Content hash of the pair identity and texts; status excluded."""
    payload = json.dumps(
        {
            "pair_id": pair.pair_id,
            "dataset_id": pair.dataset_id,
            "source_lang": pair.source_lang,
            "target_lang": pair.target_lang,
            "source_text": pair.source_text,
            "mt_text": pair.mt_text,
        },
        ensure_ascii=False,
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _same_content(a: TranslationPair, b: TranslationPair) -> bool:
    return pair_snapshot_hash(a) == pair_snapshot_hash(b)


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="milliseconds")


@dataclass(frozen=True)
class StoredAnnotationDoc:
    """The annotation plus the hash of the pair it was written against."""

    annotation: Annotation
    pair_snapshot_hash: str

    def to_dict(self) -> dict:
        return {
            "annotation": self.annotation.to_dict(),
            "pair_snapshot_hash": self.pair_snapshot_hash,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "StoredAnnotationDoc":
        return cls(
            annotation=Annotation.from_dict(doc["annotation"]),
            pair_snapshot_hash=doc["pair_snapshot_hash"],
        )


class MemoryStore:
    """In-memory backend; also the base the file backend builds on."""

    def __init__(self) -> None:
        self._write_lock = threading.RLock()
        self._datasets: set[str] = set()
        self._pairs: dict[str, TranslationPair] = {}
        self._annotations: dict[str, StoredAnnotationDoc] = {}
        # pair_id -> engine_id -> {"spans": [...], "report": {...}}
        self._detections: dict[str, dict[str, dict]] = {}

    # -- reads ------------------------------------------------------------

    def dataset_exists(self, dataset_id: str) -> bool:
        return dataset_id in self._datasets

    def get_pair(self, pair_id: str) -> TranslationPair | None:
        return self._pairs.get(pair_id)

    def list_pairs(self, dataset_id: str) -> list[TranslationPair]:
        if dataset_id not in self._datasets:
            raise UnknownDatasetError(dataset_id)
        pairs = [p for p in self._pairs.values() if p.dataset_id == dataset_id]
        pairs.sort(key=lambda p: p.pair_id)
        return pairs

    def get_annotation(self, pair_id: str) -> StoredAnnotationDoc | None:
        return self._annotations.get(pair_id)

    def get_detection(
        self, pair_id: str, engine_id: str
    ) -> tuple[list[ErrorSpan], SanitizationReport] | None:
        cached = self._detections.get(pair_id, {}).get(engine_id)
        if cached is None:
            return None
        spans = [ErrorSpan.from_dict(doc) for doc in cached["spans"]]
        return spans, SanitizationReport.from_dict(cached["report"])

    def detection_engines(self, pair_id: str) -> list[str]:
        return sorted(self._detections.get(pair_id, {}))

    # -- writes -----------------------------------------------------------

    def ingest_pairs(self, dataset_id: str, pairs: list[TranslationPair]) -> int:
        """Store new pairs as pending; identical re-submission is a no-op.

        Atomic: any conflict (same id, different content, including within
        the request itself) stores nothing.
        """
        with self._write_lock:
            conflicts: list[str] = []
            seen: dict[str, TranslationPair] = {}
            for pair in pairs:
                if pair.dataset_id != dataset_id:
                    raise StoreError(
                        f"pair {pair.pair_id!r} belongs to dataset {pair.dataset_id!r}"
                    )
                if pair.pair_id in seen and not _same_content(seen[pair.pair_id], pair):
                    conflicts.append(pair.pair_id)
                seen[pair.pair_id] = pair
                existing = self._pairs.get(pair.pair_id)
                if existing is not None and not _same_content(existing, pair):
                    conflicts.append(pair.pair_id)
            if conflicts:
                raise PairConflictError(sorted(set(conflicts)))

            new_count = 0
            for pair in pairs:
                if pair.pair_id not in self._pairs:
                    self._pairs[pair.pair_id] = replace(pair, status=PairStatus.PENDING)
                    new_count += 1
            self._datasets.add(dataset_id)
            self._persist()
            return new_count

    def mark_in_progress(self, pair_id: str) -> None:
        """pending -> in_progress; later statuses are left alone."""
        with self._write_lock:
            pair = self._pairs.get(pair_id)
            if pair is None:
                raise UnknownPairError(pair_id)
            if pair.status is PairStatus.PENDING:
                self._pairs[pair_id] = replace(pair, status=PairStatus.IN_PROGRESS)
                self._persist()

    def reset_status(self, pair_id: str) -> None:
        """Admin-only escape hatch back to pending."""
        with self._write_lock:
            pair = self._pairs.get(pair_id)
            if pair is None:
                raise UnknownPairError(pair_id)
            self._pairs[pair_id] = replace(pair, status=PairStatus.PENDING)
            self._persist()

    def submit_annotation(
        self,
        pair_id: str,
        annotation: Annotation,
        expected_version: int,
        now: str | None = None,
    ) -> int:
        """Compare-and-swap write; exactly one writer can claim each version.

        Succeeds iff expected_version equals the stored version (0 before
        the first write). Marks the pair completed.
        """
        timestamp = now if now is not None else utc_now()
        with self._write_lock:
            pair = self._pairs.get(pair_id)
            if pair is None:
                raise UnknownPairError(pair_id)
            current = self._annotations.get(pair_id)
            current_version = current.annotation.version if current else 0
            if expected_version != current_version:
                raise VersionConflictError(current_version, expected_version)

            candidate = replace(annotation, pair_id=pair_id)
            violations = validate_annotation(candidate, pair)
            if violations:
                raise AnnotationInvalidError(violations)

            new_version = current_version + 1
            stored = replace(
                candidate,
                version=new_version,
                created_at=current.annotation.created_at if current else timestamp,
                updated_at=timestamp,
            )
            self._annotations[pair_id] = StoredAnnotationDoc(
                annotation=stored, pair_snapshot_hash=pair_snapshot_hash(pair)
            )
            if status_can_advance(pair.status, PairStatus.COMPLETED):
                self._pairs[pair_id] = replace(pair, status=PairStatus.COMPLETED)
            self._persist()
            return new_version

    def put_detection(
        self,
        pair_id: str,
        engine_id: str,
        spans: list[ErrorSpan],
        report: SanitizationReport,
    ) -> None:
        with self._write_lock:
            if pair_id not in self._pairs:
                raise UnknownPairError(pair_id)
            self._detections.setdefault(pair_id, {})[engine_id] = {
                "spans": [span.to_dict() for span in spans],
                "report": report.to_dict(),
            }
            self._persist()

    # -- integrity ----------------------------------------------------------

    def audit(self) -> list[dict]:
        """Scan every stored annotation against its stored pair.

        Returns one issue dict per violation or snapshot-hash mismatch;
        empty means the store is internally consistent.
        """
        issues: list[dict] = []
        for pair_id in sorted(self._annotations):
            doc = self._annotations[pair_id]
            pair = self._pairs.get(pair_id)
            if pair is None:
                issues.append({"pair_id": pair_id, "issue": "annotation without pair"})
                continue
            if doc.pair_snapshot_hash != pair_snapshot_hash(pair):
                issues.append({"pair_id": pair_id, "issue": "pair changed under annotation"})
            for violation in validate_annotation(doc.annotation, pair):
                issues.append(
                    {"pair_id": pair_id, "issue": "validation", **violation.to_dict()}
                )
        return issues

    # -- persistence --------------------------------------------------------

    def dump_state(self) -> dict:
        """Deterministic full-state document (also the file format)."""
        return {
            "format": "postedit-store",
            "version": 1,
            "datasets": sorted(self._datasets),
            "pairs": {pid: self._pairs[pid].to_dict() for pid in sorted(self._pairs)},
            "annotations": {
                pid: self._annotations[pid].to_dict() for pid in sorted(self._annotations)
            },
            "detections": {
                pid: {
                    engine: self._detections[pid][engine]
                    for engine in sorted(self._detections[pid])
                }
                for pid in sorted(self._detections)
            },
        }

    def load_state(self, state: dict) -> None:
        if state.get("format") != "postedit-store" or state.get("version") != 1:
            raise StoreError("unrecognized store file format")
        with self._write_lock:
            self._datasets = set(state["datasets"])
            self._pairs = {
                pid: TranslationPair.from_dict(doc) for pid, doc in state["pairs"].items()
            }
            self._annotations = {
                pid: StoredAnnotationDoc.from_dict(doc)
                for pid, doc in state["annotations"].items()
            }
            self._detections = {
                pid: dict(engines) for pid, engines in state["detections"].items()
            }

    def _persist(self) -> None:  # memory backend keeps nothing
        pass


class FileStore(MemoryStore):
    """Single-file JSON persistence; every write rewrites the file atomically."""

    def __init__(self, path: str):
        super().__init__()
        self.path = path
        if os.path.exists(path):
            with open(path, encoding="utf-8") as handle:
                self.load_state(json.load(handle))

    def _persist(self) -> None:
        payload = json.dumps(self.dump_state(), ensure_ascii=False, sort_keys=True, indent=1)
        directory = os.path.dirname(os.path.abspath(self.path))
        fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".store-", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                handle.write(payload)
            os.replace(tmp_path, self.path)
        except BaseException:
            if os.path.exists(tmp_path):
                os.unlink(tmp_path)
            raise


def build_store(backend: str, path: str | None = None) -> MemoryStore:
    if backend == "memory":
        return MemoryStore()
    if backend == "file":
        if not path:
            raise ValueError("file backend requires a store path")
        return FileStore(path)
    raise ValueError(f"unknown store backend {backend!r}")
