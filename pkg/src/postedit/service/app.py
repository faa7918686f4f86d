"""HTTP API tying the workflow together.

Error code table:
  404  unknown dataset / pair
  409  ingest content conflict; annotation version conflict
  422  malformed bodies and query params (pydantic); annotation validation
       failure (violation list echoed)
  400  unknown engine, bad export format, bad status filter, bad If-Match
  401  missing/unknown bearer token when auth is configured
  403  token does not match the annotation's annotator_id
  502  engine unreachable / upstream error / unusable engine response
"""

from __future__ import annotations

import httpx
from fastapi import Depends, FastAPI, Header, Query, Request, Response
from fastapi import HTTPException

from ..detection import (
    DetectionFormatError,
    EngineRegistry,
    EngineStatusError,
    EngineUnavailableError,
    UnknownEngineError,
)
from ..exporter import record_from_annotation, to_csv, to_json
from ..spans import AnnotationInvalidError, PairStatus
from ..store import (
    MemoryStore,
    PairConflictError,
    UnknownDatasetError,
    UnknownPairError,
    VersionConflictError,
    build_store,
)
from .config import ServiceConfig, resolve_token
from .schemas import (
    AnnotationIn,
    AnnotationOut,
    DetectResponse,
    HealthResponse,
    IngestRequest,
    IngestResponse,
    PairDetail,
    PairPage,
    PairSummary,
    ReportOut,
    SpanOut,
    SubmitResponse,
)

EXPORT_FORMATS = ("json", "csv")


def create_app(
    config: ServiceConfig | None = None,
    store: MemoryStore | None = None,
    registry: EngineRegistry | None = None,
    transport: httpx.BaseTransport | None = None,
) -> FastAPI:
    """Build the service; store/registry injection is for tests."""
    config = config or ServiceConfig()
    store = store or build_store(config.store_backend, config.store_path)
    registry = registry or EngineRegistry.from_configs(list(config.engines), transport=transport)

    app = FastAPI(title="postedit", version="0.1.0")
    app.state.config = config
    app.state.store = store
    app.state.registry = registry

    def authenticate(request: Request, annotator_id: str) -> None:
        """Static bearer token per annotator; open mode when none configured."""
        if not config.auth_tokens:
            return
        header = request.headers.get("Authorization", "")
        if not header.startswith("Bearer "):
            raise HTTPException(401, detail="bearer token required")
        token = header[len("Bearer ") :]
        for known_id, reference in config.auth_tokens.items():
            expected = resolve_token(reference)
            if expected and token == expected:
                if known_id != annotator_id:
                    raise HTTPException(
                        403, detail=f"token belongs to {known_id!r}, not {annotator_id!r}"
                    )
                return
        raise HTTPException(401, detail="unknown token")

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok")

    @app.post("/datasets/{dataset_id}/pairs", response_model=IngestResponse)
    def ingest(dataset_id: str, body: IngestRequest) -> IngestResponse:
        try:
            pairs = [p.to_domain(dataset_id) for p in body.pairs]
        except ValueError as exc:
            raise HTTPException(422, detail=str(exc)) from exc
        try:
            count = store.ingest_pairs(dataset_id, pairs)
        except PairConflictError as exc:
            raise HTTPException(
                409,
                detail={
                    "message": "pair ids already exist with different content",
                    "conflicting_pair_ids": exc.pair_ids,
                },
            ) from exc
        return IngestResponse(ingested=count)

    @app.get("/datasets/{dataset_id}/pairs", response_model=PairPage)
    def list_pairs(
        dataset_id: str,
        status: str | None = Query(default=None),
        page: int = Query(default=1, ge=1),
        page_size: int = Query(default=50, ge=1, le=500),
    ) -> PairPage:
        if status is not None:
            try:
                wanted = PairStatus(status)
            except ValueError:
                valid = ", ".join(s.value for s in PairStatus)
                raise HTTPException(400, detail=f"unknown status; valid: {valid}") from None
        try:
            pairs = store.list_pairs(dataset_id)
        except UnknownDatasetError as exc:
            raise HTTPException(404, detail=str(exc)) from exc
        if status is not None:
            pairs = [p for p in pairs if p.status is wanted]
        total = len(pairs)
        total_pages = (total + page_size - 1) // page_size
        window = pairs[(page - 1) * page_size : page * page_size]
        return PairPage(
            items=[
                PairSummary(
                    pair_id=p.pair_id,
                    status=p.status.value,
                    detection_cached=bool(store.detection_engines(p.pair_id)),
                    source_text=p.source_text,
                    mt_text=p.mt_text,
                )
                for p in window
            ],
            page=page,
            page_size=page_size,
            total=total,
            total_pages=total_pages,
        )

    @app.get("/pairs/{pair_id}", response_model=PairDetail)
    def get_pair(pair_id: str) -> PairDetail:
        pair = store.get_pair(pair_id)
        if pair is None:
            raise HTTPException(404, detail=f"no pair {pair_id!r}")
        doc = store.get_annotation(pair_id)
        return PairDetail(
            pair_id=pair.pair_id,
            dataset_id=pair.dataset_id,
            source_lang=pair.source_lang,
            target_lang=pair.target_lang,
            source_text=pair.source_text,
            mt_text=pair.mt_text,
            status=pair.status.value,
            detection_engines=store.detection_engines(pair_id),
            annotation_version=doc.annotation.version if doc else 0,
            annotation=AnnotationOut.from_domain(doc.annotation) if doc else None,
        )

    @app.post("/pairs/{pair_id}/detect", response_model=DetectResponse)
    def run_detection(
        pair_id: str,
        engine: str = Query(),
        force: bool = Query(default=False),
    ) -> DetectResponse:
        pair = store.get_pair(pair_id)
        if pair is None:
            raise HTTPException(404, detail=f"no pair {pair_id!r}")
        try:
            engine_impl = registry.get(engine)
        except UnknownEngineError as exc:
            raise HTTPException(
                400,
                detail={"message": str(exc), "valid_engines": exc.known},
            ) from exc

        cached = None if force else store.get_detection(pair_id, engine)
        if cached is not None:
            spans, report = cached
            was_cached = True
        else:
            try:
                spans, report = engine_impl.detect(pair)
            except EngineUnavailableError as exc:
                raise HTTPException(502, detail=str(exc)) from exc
            except EngineStatusError as exc:
                raise HTTPException(
                    502, detail={"message": str(exc), "upstream_status": exc.status}
                ) from exc
            except DetectionFormatError as exc:
                raise HTTPException(502, detail=str(exc)) from exc
            store.put_detection(pair_id, engine, spans, report)
            was_cached = False
        store.mark_in_progress(pair_id)
        return DetectResponse(
            pair_id=pair_id,
            engine_id=engine,
            cached=was_cached,
            spans=[SpanOut.from_domain(s) for s in spans],
            report=ReportOut.from_domain(report),
        )

    @app.put("/pairs/{pair_id}/annotation", response_model=SubmitResponse)
    def submit_annotation(
        pair_id: str,
        body: AnnotationIn,
        request: Request,
        if_match: str = Header(),
    ) -> SubmitResponse:
        try:
            expected_version = int(if_match.strip().strip('"'))
        except ValueError:
            raise HTTPException(400, detail="If-Match must be an integer version") from None
        authenticate(request, body.annotator_id)
        try:
            annotation = body.to_domain(pair_id)
        except ValueError as exc:
            raise HTTPException(422, detail={"violations": [str(exc)]}) from exc
        try:
            version = store.submit_annotation(pair_id, annotation, expected_version)
        except UnknownPairError as exc:
            raise HTTPException(404, detail=str(exc)) from exc
        except VersionConflictError as exc:
            raise HTTPException(
                409,
                detail={
                    "message": "version conflict",
                    "current_version": exc.current_version,
                },
            ) from exc
        except AnnotationInvalidError as exc:
            raise HTTPException(
                422,
                detail={"violations": [v.to_dict() for v in exc.violations]},
            ) from exc
        return SubmitResponse(pair_id=pair_id, version=version, status="completed")

    @app.get("/datasets/{dataset_id}/export")
    def export_dataset(dataset_id: str, format: str = Query()) -> Response:
        if format not in EXPORT_FORMATS:
            raise HTTPException(
                400, detail=f"unknown format; valid: {', '.join(EXPORT_FORMATS)}"
            )
        try:
            pairs = store.list_pairs(dataset_id)
        except UnknownDatasetError as exc:
            raise HTTPException(404, detail=str(exc)) from exc
        records = []
        for pair in pairs:  # already ordered by pair_id
            if pair.status is not PairStatus.COMPLETED:
                continue
            doc = store.get_annotation(pair.pair_id)
            if doc is None:
                continue
            records.append(record_from_annotation(pair, doc.annotation))
        if format == "json":
            return Response(content=to_json(records), media_type="application/json")
        return Response(content=to_csv(records), media_type="text/csv; charset=utf-8")

    return app
