"""The inlinescope HTTP service.

Every toolkit operation is exposed as a POST endpoint taking and returning
JSON; binaries travel base64-encoded. Toolkit errors map to HTTP 422 with a
structured {"error": {"kind", "detail"}} body so thin clients can translate
them back into exit codes.
"""

from __future__ import annotations

import base64
import binascii

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__, analysis, cost_model, ground_truth, remarks, sweep
from ..errors import InlineScopeError
from ..features import extract_features, parse_listing, features_to_csv
from ..features.registry import REGISTRY_VERSION, get_registry
from . import schemas


def _error_response(kind: str, detail: str, status_code: int = 422) -> JSONResponse:
    return JSONResponse(
        status_code=status_code, content={"error": {"kind": kind, "detail": detail}}
    )


def create_app() -> FastAPI:
    app = FastAPI(
        title="inlinescope",
        version=__version__,
        description="Function-inlining measurement and amplification service",
    )

    @app.exception_handler(InlineScopeError)
    async def _toolkit_error(_request: Request, exc: InlineScopeError) -> JSONResponse:
        return _error_response(type(exc).__name__, str(exc))

    @app.exception_handler(ValueError)
    async def _value_error(_request: Request, exc: ValueError) -> JSONResponse:
        return _error_response("ValueError", str(exc))

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    @app.get("/version", response_model=schemas.VersionResponse)
    def version() -> schemas.VersionResponse:
        return schemas.VersionResponse(version=__version__, registry_version=REGISTRY_VERSION)

    # -- ground truth --------------------------------------------------

    @app.post("/ground-truth/report")
    def ground_truth_report(req: schemas.GroundTruthRequest) -> dict:
        try:
            image = base64.b64decode(req.binary_b64, validate=True)
        except (binascii.Error, ValueError) as exc:
            raise ValueError(f"binary_b64 is not valid base64: {exc}") from exc
        report = ground_truth.compute_inlining_report(image, req.label)
        return ground_truth.report_to_dict(report)

    @app.post("/ground-truth/delta")
    def ground_truth_delta(req: schemas.DeltaFlowRequest) -> dict:
        baseline = ground_truth.report_from_dict(req.baseline)
        variant = ground_truth.report_from_dict(req.variant)
        return ground_truth.flow_to_dict(ground_truth.delta_flow(baseline, variant))

    # -- remarks --------------------------------------------------------

    @app.post("/remarks/parse")
    def remarks_parse(req: schemas.RemarkParseRequest) -> dict:
        parsed = remarks.parse_remark_stream(req.text)
        summary = remarks.summarize(parsed)
        return {
            "remarks": [remarks.remark_to_dict(r) for r in parsed],
            "summary": {
                "passed_count": summary.passed_count,
                "missed_count": summary.missed_count,
                "analysis_count": summary.analysis_count,
                "reason_histogram": summary.reason_histogram,
                "inlined_pairs": sorted(summary.inlined_pairs),
            },
        }

    @app.post("/remarks/reconcile")
    def remarks_reconcile(req: schemas.ReconcileRequest) -> dict:
        if req.remarks is not None:
            parsed = [remarks.remark_from_dict(d) for d in req.remarks]
        elif req.text is not None:
            parsed = remarks.parse_remark_stream(req.text)
        else:
            raise ValueError("either remarks or text must be provided")
        report = ground_truth.report_from_dict(req.report)
        return remarks.discrepancy_to_dict(remarks.reconcile(parsed, report))

    # -- cost model -------------------------------------------------------

    @app.post("/cost-model/simulate")
    def simulate(req: schemas.SimulateRequest) -> dict:
        site = cost_model.CallSiteDescription.from_dict(req.site)
        params = (
            cost_model.InlineParams.from_dict(req.params)
            if req.params
            else cost_model.InlineParams()
        )
        opt_level = cost_model.OptLevel(req.opt_level)
        decision = cost_model.decide(site, opt_level, params)
        doc = decision.to_dict()
        doc["params"] = params.to_dict()
        doc["opt_level"] = opt_level.value
        return doc

    # -- features -----------------------------------------------------------

    @app.post("/features/extract")
    def features_extract(req: schemas.FeatureExtractRequest) -> dict:
        listing = parse_listing(req.listing_text)
        version = req.registry_version or REGISTRY_VERSION
        per_function, aggregate = extract_features(listing, version)
        return {
            "registry_version": version,
            "functions": {name: vec.values for name, vec in per_function.items()},
            "aggregate": aggregate.values,
            "csv": features_to_csv(per_function, aggregate),
        }

    @app.get("/features/registry")
    def features_registry(version: str = REGISTRY_VERSION) -> dict:
        registry = get_registry(version)
        return {
            "version": registry.version,
            "slots": [
                {
                    "index": s.index,
                    "name": s.name,
                    "category": s.category,
                    "aggregation": s.aggregation,
                    "anchored": s.anchored,
                }
                for s in registry.slots
            ],
        }

    # -- analysis -------------------------------------------------------------

    @app.post("/analysis/cdf")
    def analysis_cdf(req: schemas.CdfRequest) -> dict:
        series = analysis.inlining_cdf(req.ratios)
        out = {
            "points": [[r, f] for r, f in series.points],
            "summary": {
                "min": round(series.minimum, 4),
                "max": round(series.maximum, 4),
                "mean": round(series.mean, 4),
            },
            "csv": analysis.cdf_to_csv(series),
        }
        if req.svg:
            out["svg"] = analysis.polyline_svg(
                series.points, title="inlining ratio CDF",
                x_label="inlining ratio", y_label="fraction of binaries",
            )
        return out

    @app.post("/analysis/drift")
    def analysis_drift(req: schemas.DriftRequest) -> dict:
        version = req.registry_version or REGISTRY_VERSION
        names = None
        try:
            names = get_registry(version).names()
        except InlineScopeError:
            pass
        report = analysis.rank_features(
            req.table_a, req.table_b, req.k, names=names,
            registry_version_a=version, registry_version_b=version,
        )
        return {
            "registry_version": report.registry_version,
            "top_k": report.top_k,
            "features": [
                {
                    "index": d.index,
                    "name": d.name,
                    "median_a": d.median_a,
                    "median_b": d.median_b,
                    "median_gap": d.median_gap,
                    "mean_gap": d.mean_gap,
                    "kept_a": d.kept_a,
                    "kept_b": d.kept_b,
                }
                for d in report.features
            ],
            "csv": analysis.drift_report_to_csv(report),
        }

    # -- sweeps -----------------------------------------------------------------

    @app.post("/sweep/variants")
    def sweep_variants(req: schemas.SweepConfigRequest) -> dict:
        config = sweep.config_from_dict(req.config)
        assignments = sweep.enumerate_variants(config)
        return {
            "count": len(assignments),
            "base_flags": config.effective_base_flags(),
            "variants": [
                {
                    "variant_index": i,
                    "assignment": {axis.name: value for axis, value in assignment},
                    "flags": sweep.assignment_flags(assignment),
                }
                for i, assignment in enumerate(assignments)
            ],
        }

    @app.post("/sweep/run")
    def sweep_run(req: schemas.SweepConfigRequest) -> dict:
        config = sweep.config_from_dict(req.config)
        results = sweep.run_sweep(config)
        if all(r.status != "Ok" for r in results):
            return JSONResponse(
                status_code=422,
                content={
                    "error": {
                        "kind": "NoSuccessfulBuild",
                        "detail": "every variant failed to build",
                    },
                    "csv": sweep.emit_report(results),
                },
            )
        return {"csv": sweep.emit_report(results), "results": _results_json(results)}

    @app.post("/sweep/search")
    def sweep_search(req: schemas.SweepSearchRequest) -> dict:
        config = sweep.config_from_dict(req.config)
        result = sweep.search_extreme(config, req.budget)
        return {
            "best_flags": result.best_flags,
            "best": _result_json(result.best_result),
            "builds_used": result.builds_used,
            "trajectory": [
                {
                    "axis": s.axis,
                    "value": s.value,
                    "flags": s.flags,
                    "ratio": s.ratio,
                    "status": s.status,
                    "accepted": s.accepted,
                }
                for s in result.trajectory
            ],
        }

    return app


def _result_json(r: sweep.VariantResult) -> dict:
    return {
        "variant_index": r.variant_index,
        "flags": r.flags,
        "status": r.status,
        "ratio": r.inlining_ratio,
        "total_functions": r.total_functions,
        "inlined": r.inlined,
        "remaining": r.remaining,
        "eliminated": r.eliminated,
        "compile_seconds": r.compile_seconds,
        "binary_bytes": r.binary_bytes,
        "failure_detail": r.failure_detail,
    }


def _results_json(results: list[sweep.VariantResult]) -> list[dict]:
    return [_result_json(r) for r in results]
