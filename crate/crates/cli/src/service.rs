//! Stateless HTTP service used by the interactive explorer.
//!
//! Every response is recomputed from the request body:
//!
//! * `GET /catalog`: the shipped triangulations with their liftings;
//! * `POST /evaluate`: a patchwork file, answered with its evaluation;
//! * `POST /flip`: `{patchwork, edge}`, answered with the flipped patchwork,
//!   the bridge-flip flag and the new evaluation;
//! * `POST /toggle`: `{patchwork, point}`, answered with the toggled
//!   patchwork and the new evaluation.
//!
//! Coordinates of loops and regions are diamond coordinates.  Flip edges are
//! given in triangle coordinates; toggle points may lie in any quadrant of
//! the diamond and act on the lattice point `(|x|, |y|)`.

use std::net::SocketAddr;

use axum::extract::rejection::JsonRejection;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tcurve_core::catalog;
use tcurve_core::document::{PatchworkFile, TriangulationSource};
use tcurve_core::patchwork::NestingEdge;
use tcurve_core::triangulation::{edge, TriangulationFile};
use tcurve_core::{Error, LoopKind, Patchwork, Point};

/// A loop drawn as polylines through edge midpoints.  A loop is cut into
/// several polylines where it crosses the boundary of the diamond.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopView {
    pub kind: LoopKind,
    pub segments: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionView {
    pub id: usize,
    /// Every diamond lattice point of the region.
    pub vertices: Vec<[i32; 2]>,
    pub is_root: bool,
    pub depth: usize,
}

/// Node of the nesting tree: a region and the regions directly inside it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestingNode {
    pub region: usize,
    /// Loop separating the region from its parent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oval: Option<usize>,
    pub children: Vec<NestingNode>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationView {
    pub scheme: String,
    pub p: usize,
    pub n: usize,
    pub loop_count: usize,
    pub loops: Vec<LoopView>,
    pub regions: Vec<RegionView>,
    pub nesting: NestingNode,
}

impl EvaluationView {
    pub fn of(pw: &Patchwork) -> Self {
        let stats = pw.scheme().stats();
        let loops = pw
            .loops()
            .iter()
            .enumerate()
            .map(|(i, l)| LoopView { kind: l.kind, segments: polylines(&pw.loop_segments(i)) })
            .collect();
        let dia = pw.surface().diamond();
        let mut points: Vec<Vec<[i32; 2]>> = vec![Vec::new(); pw.regions().len()];
        for pos in 0..dia.position_count() {
            let (x, y) = dia.point(pos);
            points[pw.region_of(dia.vertex_of(pos))].push([x, y]);
        }
        let regions = points
            .into_iter()
            .enumerate()
            .map(|(id, vertices)| RegionView {
                id,
                vertices,
                is_root: id == pw.root_region(),
                depth: pw.regions()[id].depth,
            })
            .collect();
        EvaluationView {
            scheme: pw.scheme().to_string(),
            p: stats.p,
            n: stats.n,
            loop_count: stats.loops,
            loops,
            regions,
            nesting: nesting_tree(pw.root_region(), None, pw.nesting()),
        }
    }
}

fn polylines(segments: &[[(f64, f64); 2]]) -> Vec<Vec<[f64; 2]>> {
    let mut out: Vec<Vec<[f64; 2]>> = Vec::new();
    for &[a, b] in segments {
        let (a, b) = ([a.0, a.1], [b.0, b.1]);
        match out.last_mut() {
            Some(line) if line.last() == Some(&a) => line.push(b),
            _ => out.push(vec![a, b]),
        }
    }
    // A closed polyline cut at an arbitrary segment is joined back.
    if out.len() > 1 && out.last().and_then(|l| l.last()) == out[0].first() {
        let head = out.remove(0);
        out.last_mut().expect("nonempty").extend_from_slice(&head[1..]);
    }
    out
}

fn nesting_tree(region: usize, oval: Option<usize>, edges: &[NestingEdge]) -> NestingNode {
    let children = edges
        .iter()
        .filter(|e| e.outside == region)
        .map(|e| nesting_tree(e.inside, Some(e.oval), edges))
        .collect();
    NestingNode { region, oval, children }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlipRequest {
    pub patchwork: PatchworkFile,
    pub edge: [Point; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlipResponse {
    pub patchwork: PatchworkFile,
    pub is_bridge_flip: bool,
    pub evaluation: EvaluationView,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ToggleRequest {
    pub patchwork: PatchworkFile,
    pub point: Point,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ToggleResponse {
    pub patchwork: PatchworkFile,
    pub evaluation: EvaluationView,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatalogItem {
    pub key: String,
    pub degree: u32,
    pub checksum: String,
    pub triangulation: TriangulationFile,
}

/// Error body `{"error": reason, "detail": message}`.
#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    reason: String,
    detail: String,
}

impl From<Error> for ApiError {
    fn from(err: Error) -> Self {
        let (status, reason) = match &err {
            Error::NotFlippable { .. } | Error::NotAnInteriorEdge { .. } => {
                (StatusCode::UNPROCESSABLE_ENTITY, "not flippable")
            }
            Error::UnknownCatalogKey(_) => (StatusCode::NOT_FOUND, "unknown triangulation"),
            Error::Invariant(_) | Error::Io(_) => (StatusCode::INTERNAL_SERVER_ERROR, "internal error"),
            _ => (StatusCode::BAD_REQUEST, "invalid patchwork"),
        };
        ApiError { status, reason: reason.into(), detail: err.to_string() }
    }
}

impl From<JsonRejection> for ApiError {
    fn from(rejection: JsonRejection) -> Self {
        ApiError {
            status: rejection.status(),
            reason: "malformed request".into(),
            detail: rejection.body_text(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.reason, "detail": self.detail }))).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

fn evaluate_file(file: &PatchworkFile) -> Result<Patchwork, Error> {
    let (t, s) = file.resolve()?;
    Patchwork::new(&t, s)
}

async fn catalog_handler() -> ApiResult<Vec<CatalogItem>> {
    let items = catalog::entries()?
        .into_iter()
        .map(|e| CatalogItem {
            key: e.key.to_string(),
            degree: e.triangulation.degree(),
            checksum: e.triangulation.checksum(),
            triangulation: TriangulationFile::from_triangulation(&e.triangulation, Some(e.lifting)),
        })
        .collect();
    Ok(Json(items))
}

async fn evaluate_handler(body: Result<Json<PatchworkFile>, JsonRejection>) -> ApiResult<EvaluationView> {
    let Json(file) = body?;
    Ok(Json(EvaluationView::of(&evaluate_file(&file)?)))
}

async fn flip_handler(body: Result<Json<FlipRequest>, JsonRejection>) -> ApiResult<FlipResponse> {
    let Json(req) = body?;
    let pw = evaluate_file(&req.patchwork)?;
    let (flipped, is_bridge_flip) = pw.flip(edge(req.edge[0], req.edge[1]))?;
    let patchwork = PatchworkFile::new(
        TriangulationSource::Inline(TriangulationFile::from_triangulation(flipped.triangulation(), None)),
        &flipped.signs(),
    );
    Ok(Json(FlipResponse { patchwork, is_bridge_flip, evaluation: EvaluationView::of(&flipped) }))
}

async fn toggle_handler(body: Result<Json<ToggleRequest>, JsonRejection>) -> ApiResult<ToggleResponse> {
    let Json(req) = body?;
    let (t, s) = req.patchwork.resolve()?;
    let point = (req.point.0.abs(), req.point.1.abs());
    let toggled = s.toggled(point)?;
    let pw = Patchwork::new(&t, toggled)?;
    let patchwork = PatchworkFile::new(req.patchwork.triangulation.clone(), &toggled);
    Ok(Json(ToggleResponse { patchwork, evaluation: EvaluationView::of(&pw) }))
}

/// The service routes.
pub fn router() -> Router {
    Router::new()
        .route("/catalog", get(catalog_handler))
        .route("/evaluate", post(evaluate_handler))
        .route("/flip", post(flip_handler))
        .route("/toggle", post(toggle_handler))
}

/// Serves on `127.0.0.1:port` until the process is stopped.
pub async fn serve(port: u16) -> std::io::Result<()> {
    let addr = SocketAddr::from(([127, 0, 0, 1], port));
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router()).await
}
