use std::path::Path;

use anyhow::{bail, Context};
use gluedwalk::gluedtree::verify_lumping;
use gluedwalk::jacobi::{build_j2n, eigensystem};
use gluedwalk::walk::{lift_eigenpairs, position_distribution, step};
use gluedwalk::{
    bound_report, time_avg_empirical, time_avg_spectral, ArcIndex, Chirality, EigenKind, GluedTree,
    LimitProbe, Method, Mirror, UnitaryEigenpair, WalkParams, WalkState,
};
use rayon::prelude::*;

use crate::output::{Cell, Table};

const RESIDUAL_TOL: f64 = 1e-10;
const MARGIN_TOL: f64 = 1e-12;
const LUMPING_TOL: f64 = 1e-12;

pub struct Report {
    pub table: Table,
    pub failures: Vec<String>,
}

fn base_meta(table: &mut Table, command: &str, params: &WalkParams) {
    table.meta("command", command);
    table.meta("n", params.n());
    table.meta("p", params.p());
    table.meta("q", params.q());
}

fn kind_name(kind: EigenKind) -> &'static str {
    match kind {
        EigenKind::PlusOne => "plus_one",
        EigenKind::MinusOne => "minus_one",
        EigenKind::Interior => "interior",
    }
}

fn mirror_name(mirror: Mirror) -> &'static str {
    match mirror {
        Mirror::Symmetric => "symmetric",
        Mirror::Antisymmetric => "antisymmetric",
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// `‖U u - μ u‖∞`.
fn lift_residual(e: &UnitaryEigenpair, params: &WalkParams) -> f64 {
    let state = WalkState::from_amplitudes(params.n(), e.u.clone()).expect("lifted vectors have 4n-2 entries");
    step(&state, params)
        .amplitudes()
        .iter()
        .zip(&e.u)
        .map(|(a, u)| (a - e.mu * u).norm())
        .fold(0.0, f64::max)
}

pub fn spectrum(params: &WalkParams, jacobi_only: bool) -> anyhow::Result<Report> {
    let mut table = Table::new(&[
        "section", "n", "p", "index", "lambda", "edge_gap", "kind", "mirror", "norm_sq", "residual",
        "mu_re", "mu_im", "phi", "label",
    ]);
    base_meta(&mut table, "spectrum", params);
    let mut failures = Vec::new();
    let (n, p) = (params.n(), params.p());

    let spec = build_j2n(params);
    let eigs = eigensystem(params).context("computing the Jacobi eigensystem")?;
    for (idx, e) in eigs.iter().enumerate() {
        let residual = spec.residual(e.lambda, &e.vector) / max_abs(&e.vector);
        if residual > RESIDUAL_TOL {
            failures.push(format!("Jacobi residual {residual:e} at λ = {}", e.lambda));
        }
        table.push(vec![
            "jacobi".into(),
            n.into(),
            p.into(),
            (idx + 1).into(),
            e.lambda.into(),
            e.edge_gap.into(),
            kind_name(e.kind).into(),
            mirror_name(e.mirror).into(),
            e.norm_sq.into(),
            residual.into(),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
        ]);
    }

    if !jacobi_only {
        let lifted = lift_eigenpairs(&eigs, params).context("lifting to eigenpairs of U")?;
        for (idx, e) in lifted.iter().enumerate() {
            let residual = lift_residual(e, params);
            if residual > RESIDUAL_TOL {
                failures.push(format!("lifted residual {residual:e} at μ = {}", e.mu));
            }
            let norm_sq: f64 = e.u.iter().map(|c| c.norm_sqr()).sum();
            table.push(vec![
                "unitary".into(),
                n.into(),
                p.into(),
                (idx + 1).into(),
                e.source_lambda.into(),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                norm_sq.into(),
                residual.into(),
                e.mu.re.into(),
                e.mu.im.into(),
                e.phi.into(),
                e.label.into(),
            ]);
        }
    }
    Ok(Report { table, failures })
}

pub fn evolve(
    params: &WalkParams,
    start: usize,
    chirality: Option<Chirality>,
    steps: u64,
) -> anyhow::Result<Report> {
    let n = params.n();
    if !(1..=2 * n).contains(&start) {
        bail!("start vertex {start} is outside 1..={}", 2 * n);
    }
    let starts: Vec<(ArcIndex, f64)> = match chirality {
        Some(c) => vec![(ArcIndex::new(start, c), 1.0)],
        None if start == 1 => vec![(ArcIndex::new(1, Chirality::R), 1.0)],
        None if start == 2 * n => vec![(ArcIndex::new(start, Chirality::L), 1.0)],
        None => vec![(ArcIndex::new(start, Chirality::L), 0.5), (ArcIndex::new(start, Chirality::R), 0.5)],
    };
    let mut states = Vec::with_capacity(starts.len());
    for (arc, weight) in starts {
        let state = WalkState::basis(n, arc)
            .with_context(|| format!("vertex {start} has no {:?} arc", arc.chirality))?;
        states.push((state, weight));
    }

    let mut table = Table::new(&["t", "x", "probability"]);
    base_meta(&mut table, "evolve", params);
    table.meta("start", start);
    table.meta("chirality", chirality.map(|c| format!("{c:?}")).unwrap_or_else(|| "averaged".into()));
    table.meta("steps", steps);
    let mut failures = Vec::new();
    for t in 0..=steps {
        let mut dist = vec![0.0; 2 * n];
        for (state, weight) in &states {
            for (d, mass) in dist.iter_mut().zip(position_distribution(state)?) {
                *d += weight * mass;
            }
        }
        let total: f64 = dist.iter().sum();
        if (total - 1.0).abs() > RESIDUAL_TOL {
            failures.push(format!("t = {t}: probabilities sum to {total}"));
        }
        for (x, prob) in dist.iter().enumerate() {
            table.push(vec![t.into(), (x + 1).into(), (*prob).into()]);
        }
        for (state, _) in states.iter_mut() {
            *state = step(state, params);
        }
    }
    Ok(Report { table, failures })
}

pub fn timeavg(params: &WalkParams, method: Method) -> anyhow::Result<Report> {
    let dist = match method {
        Method::Spectral => time_avg_spectral(params)?,
        Method::Empirical { horizon } => time_avg_empirical(params, horizon)?,
    };
    let mut table = Table::new(&["i", "x", "probability"]);
    base_meta(&mut table, "timeavg", params);
    match method {
        Method::Spectral => table.meta("method", "spectral"),
        Method::Empirical { horizon } => {
            table.meta("method", "empirical");
            table.meta("horizon", horizon);
        }
    }
    let m = 2 * params.n();
    let mut failures = Vec::new();
    for (i, total) in dist.values.row_sums().iter().enumerate() {
        if (total - 1.0).abs() > RESIDUAL_TOL {
            failures.push(format!("row i = {} sums to {total}", i + 1));
        }
    }
    for i in 1..=m {
        for x in 1..=m {
            table.push(vec![i.into(), x.into(), dist.get(i, x).into()]);
        }
    }
    Ok(Report { table, failures })
}

pub fn bound(params: &WalkParams) -> anyhow::Result<Report> {
    let report = bound_report(params, Some(LimitProbe { i: 1, x: 1, k: 0 }))?;
    let mut table = Table::new(&["i", "x", "bound", "p_bar", "margin"]);
    base_meta(&mut table, "bound", params);
    let min_margin = report.min_margin();
    table.meta("min_margin", min_margin);
    table.meta("limit_fixed_1_1", report.limit_p_gt_q);
    table.meta("limit_centre_k0", report.limit_p_lt_q);
    let m = 2 * params.n();
    for i in 0..m {
        for x in 0..m {
            table.push(vec![
                (i + 1).into(),
                (x + 1).into(),
                report.bound[(i, x)].into(),
                report.dist.values[(i, x)].into(),
                report.margin[(i, x)].into(),
            ]);
        }
    }
    let mut failures = Vec::new();
    if min_margin < -MARGIN_TOL {
        failures.push(format!("bound exceeds the time average by {:e}", -min_margin));
    }
    Ok(Report { table, failures })
}

pub fn gluedtree(
    k: usize,
    n: usize,
    seed: u64,
    steps: usize,
    simple: bool,
    edges: Option<&Path>,
) -> anyhow::Result<Report> {
    let tree = if simple { GluedTree::build_simple(k, n, seed)? } else { GluedTree::build(k, n, seed)? };
    if let Some(path) = edges {
        std::fs::write(path, tree.edge_list()).with_context(|| format!("writing {}", path.display()))?;
    }
    let lumping_error = verify_lumping(&tree, steps);

    let mut table = Table::new(&[
        "k", "n", "p", "seed", "vertices", "edges", "glue_edges", "repeated_glue_edges", "steps",
        "lumping_error",
    ]);
    table.meta("command", "gluedtree");
    table.meta("gluing", if simple { "simple" } else { "multiset" });
    table.push(vec![
        k.into(),
        n.into(),
        tree.walk_params().p().into(),
        seed.into(),
        tree.vertex_count().into(),
        tree.edge_count().into(),
        tree.glue_edges.into(),
        tree.repeated_glue_edges().into(),
        steps.into(),
        lumping_error.into(),
    ]);
    let mut failures = Vec::new();
    if lumping_error > LUMPING_TOL {
        failures.push(format!("lumping error {lumping_error:e}"));
    }
    Ok(Report { table, failures })
}

struct PointCheck {
    jacobi_residual: f64,
    lift_residual: f64,
    symmetry_error: f64,
    row_sum_error: f64,
    min_margin: f64,
}

impl PointCheck {
    fn passes(&self) -> bool {
        self.jacobi_residual <= RESIDUAL_TOL
            && self.lift_residual <= RESIDUAL_TOL
            && self.symmetry_error <= RESIDUAL_TOL
            && self.row_sum_error <= RESIDUAL_TOL
            && self.min_margin >= -MARGIN_TOL
    }
}

fn check_point(n: usize, p: f64) -> anyhow::Result<PointCheck> {
    let params = WalkParams::new(n, p)?;
    let spec = build_j2n(&params);
    let eigs = eigensystem(&params)?;
    let jacobi_residual = eigs
        .iter()
        .map(|e| spec.residual(e.lambda, &e.vector) / max_abs(&e.vector))
        .fold(0.0, f64::max);
    let lift_residual = lift_eigenpairs(&eigs, &params)?
        .iter()
        .map(|e| lift_residual(e, &params))
        .fold(0.0, f64::max);
    let report = bound_report(&params, None)?;
    let row_sum_error = report.dist.values.row_sums().iter().map(|s| (s - 1.0).abs()).fold(0.0, f64::max);
    Ok(PointCheck {
        jacobi_residual,
        lift_residual,
        symmetry_error: report.dist.symmetry_error(),
        row_sum_error,
        min_margin: report.min_margin(),
    })
}

pub fn certify(points: &[(usize, f64)]) -> anyhow::Result<Report> {
    let results: Vec<anyhow::Result<PointCheck>> =
        points.par_iter().map(|&(n, p)| check_point(n, p)).collect();

    let mut table = Table::new(&[
        "n", "p", "jacobi_residual", "lift_residual", "symmetry_error", "row_sum_error", "min_margin",
        "status", "detail",
    ]);
    table.meta("command", "certify");
    table.meta("points", points.len());
    let mut failures = Vec::new();
    for (&(n, p), result) in points.iter().zip(results) {
        match result {
            Ok(c) => {
                let ok = c.passes();
                if !ok {
                    failures.push(format!("n = {n}, p = {p}: check out of tolerance"));
                }
                table.push(vec![
                    n.into(),
                    p.into(),
                    c.jacobi_residual.into(),
                    c.lift_residual.into(),
                    c.symmetry_error.into(),
                    c.row_sum_error.into(),
                    c.min_margin.into(),
                    if ok { "pass" } else { "fail" }.into(),
                    Cell::Empty,
                ]);
            }
            Err(err) => {
                failures.push(format!("n = {n}, p = {p}: {err:#}"));
                let mut row = vec![n.into(), p.into()];
                row.extend(std::iter::repeat_n(Cell::Empty, 5));
                row.push("fail".into());
                row.push(format!("{err:#}").into());
                table.push(row);
            }
        }
    }
    table.meta("failed", failures.len());
    Ok(Report { table, failures })
}
