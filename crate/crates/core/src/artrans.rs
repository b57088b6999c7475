//! Minimal projective presentations, the transpose, vector-space duality and
//! the Auslander-Reiten translates.
//!
//! A morphism `P_u -> P_v` between indecomposable projectives is a scalar
//! multiple of the unique path `v -> u` (nonzero only if `v <= u`), so a
//! morphism of projective sums is a scalar matrix with that support.

use std::sync::Arc;

use rayon::prelude::*;

use crate::approx::{default_max_depth, interval_resolution};
use crate::error::{Error, Result};
use crate::interval::IntervalPoset;
use crate::linalg::{Echelon, Field, FpMatrix};
use crate::module::{cokernel, kernel, ModuleMorphism, PersistenceModule};
use crate::poset::Poset;

/// Vectors of `M(x)` spanning a complement of the images of all incoming
/// arrows, chosen among standard basis vectors in index order.
fn top_basis(m: &PersistenceModule, x: usize) -> Vec<Vec<u32>> {
    let f = m.field();
    let d = m.dim(x);
    let mut ech = Echelon::new(f, d);
    for &(_, e) in m.poset().in_edges(x) {
        let a = m.edge_map(e);
        for c in 0..a.cols() {
            ech.insert(&a.col(c));
        }
    }
    (0..d)
        .filter_map(|k| {
            let mut v = vec![0; d];
            v[k] = 1;
            ech.insert(&v).then_some(v)
        })
        .collect()
}

/// `dim M(x) - dim sum of images of arrows into x`, per vertex.
pub fn top_dims(m: &PersistenceModule) -> Vec<usize> {
    (0..m.poset().len())
        .map(|x| {
            let cols: Vec<FpMatrix> = m
                .poset()
                .in_edges(x)
                .iter()
                .map(|&(_, e)| m.edge_map(e).clone())
                .collect();
            let img = FpMatrix::hstack(m.field(), m.dim(x), &cols.iter().collect::<Vec<_>>());
            m.dim(x) - img.rank()
        })
        .collect()
}

/// `P_{g_0} + P_{g_1} + ...` for the generator vertices `gens`.
pub fn projective_sum(poset: &Arc<Poset>, field: Field, gens: &[usize]) -> PersistenceModule {
    let parts: Vec<PersistenceModule> = gens
        .iter()
        .map(|&g| PersistenceModule::projective_at(poset.clone(), field, g))
        .collect();
    PersistenceModule::direct_sum(poset.clone(), field, &parts.iter().collect::<Vec<_>>())
}

/// The morphism of projective sums with scalar matrix `lambda`
/// (rows: target generators, columns: source generators).
pub fn projective_morphism(
    source: Arc<PersistenceModule>,
    target: Arc<PersistenceModule>,
    source_gens: &[usize],
    target_gens: &[usize],
    lambda: &FpMatrix,
) -> Result<ModuleMorphism> {
    let p = source.poset().clone();
    if lambda.shape() != (target_gens.len(), source_gens.len()) {
        return Err(Error::ShapeMismatch("presentation matrix".into()));
    }
    for (r, &v) in target_gens.iter().enumerate() {
        for (c, &u) in source_gens.iter().enumerate() {
            if lambda.get(r, c) != 0 && !p.leq(v, u) {
                return Err(Error::InvalidModule(format!(
                    "no morphism from P_{} to P_{}",
                    p.label(u),
                    p.label(v)
                )));
            }
        }
    }
    let components = (0..p.len())
        .map(|w| {
            let rows: Vec<usize> = (0..target_gens.len()).filter(|&r| p.leq(target_gens[r], w)).collect();
            let cols: Vec<usize> = (0..source_gens.len()).filter(|&c| p.leq(source_gens[c], w)).collect();
            lambda.select(&rows, &cols)
        })
        .collect();
    ModuleMorphism::new(source, target, components)
}

/// A minimal projective presentation `P_1 -> P_0 -> M -> 0`.
#[derive(Clone, Debug)]
pub struct ProjectivePresentation {
    /// Vertex of each generator of `P_0`, in block order.
    pub p0: Vec<usize>,
    /// Vertex of each generator of `P_1`, in block order.
    pub p1: Vec<usize>,
    /// Rows index `p0`, columns index `p1`; entry `(b, a)` is zero unless
    /// `p0[b] <= p1[a]`.
    pub matrix: FpMatrix,
    pub d1: ModuleMorphism,
    pub epsilon: ModuleMorphism,
}

fn counts(n: usize, gens: &[usize]) -> Vec<usize> {
    let mut out = vec![0; n];
    for &g in gens {
        out[g] += 1;
    }
    out
}

impl ProjectivePresentation {
    pub fn p0_mults(&self) -> Vec<usize> {
        counts(self.epsilon.target.poset().len(), &self.p0)
    }

    pub fn p1_mults(&self) -> Vec<usize> {
        counts(self.epsilon.target.poset().len(), &self.p1)
    }

    /// No entry connects generators at the same vertex.
    pub fn is_radical(&self) -> bool {
        self.p0.iter().enumerate().all(|(b, &v)| {
            self.p1
                .iter()
                .enumerate()
                .all(|(a, &u)| u != v || self.matrix.get(b, a) == 0)
        })
    }
}

/// Projective cover of `m` built from the top, then the projective cover of
/// its kernel; both steps are minimal by construction.
pub fn minimal_projective_presentation(m: &Arc<PersistenceModule>) -> Result<ProjectivePresentation> {
    let p = m.poset().clone();
    let f = m.field();
    let t = m.transfers();

    let mut p0 = Vec::new();
    let mut p0_vecs = Vec::new();
    for x in 0..p.len() {
        for g in top_basis(m, x) {
            p0.push(x);
            p0_vecs.push(g);
        }
    }
    let p0_mod = Arc::new(projective_sum(&p, f, &p0));
    let eps_components = (0..p.len())
        .map(|w| {
            let cols: Vec<FpMatrix> = p0
                .iter()
                .zip(&p0_vecs)
                .filter(|(&x, _)| p.leq(x, w))
                .map(|(&x, g)| FpMatrix::column(f, &t.map(x, w).apply(g)))
                .collect();
            FpMatrix::hstack(f, m.dim(w), &cols.iter().collect::<Vec<_>>())
        })
        .collect();
    let epsilon = ModuleMorphism::new(p0_mod.clone(), m.clone(), eps_components)?;

    let (k, incl) = kernel(&epsilon)?;
    let mut p1 = Vec::new();
    let mut cols: Vec<Vec<u32>> = Vec::new();
    for x in 0..p.len() {
        let local: Vec<usize> = (0..p0.len()).filter(|&b| p.leq(p0[b], x)).collect();
        for g in top_basis(&k, x) {
            let img = incl.components[x].apply(&g);
            let mut col = vec![0; p0.len()];
            for (pos, &b) in local.iter().enumerate() {
                col[b] = img[pos];
            }
            p1.push(x);
            cols.push(col);
        }
    }
    let matrix = FpMatrix::from_vec(f, cols.len(), p0.len(), cols.concat()).transpose();
    let p1_mod = Arc::new(projective_sum(&p, f, &p1));
    let d1 = projective_morphism(p1_mod, p0_mod, &p1, &p0, &matrix)?;
    Ok(ProjectivePresentation {
        p0,
        p1,
        matrix,
        d1,
        epsilon,
    })
}

/// `D M` as a module over `target`, which must be the opposite of the poset
/// of `m`: same dimensions, transposed matrices on reversed edges.
pub fn dual_onto(m: &PersistenceModule, target: &Arc<Poset>) -> Result<PersistenceModule> {
    let src = m.poset();
    if !target.is_opposite_of(src) {
        return Err(Error::InvalidPoset("dual target is not the opposite poset".into()));
    }
    let maps = target
        .edges()
        .iter()
        .map(|&(y, x)| {
            let e = src.edge_id(x, y).expect("reversed edge");
            m.edge_map(e).transpose()
        })
        .collect();
    PersistenceModule::new(target.clone(), m.field(), m.dims().to_vec(), maps)
}

/// `D M` over a fresh copy of the opposite poset.
pub fn dual(m: &PersistenceModule) -> PersistenceModule {
    let op = Arc::new(m.poset().opposite());
    dual_onto(m, &op).expect("opposite poset matches by construction")
}

/// `Tr M` as a module over `target`, the opposite of the poset of `m`.
pub fn transpose_onto(m: &Arc<PersistenceModule>, target: &Arc<Poset>) -> Result<PersistenceModule> {
    if !target.is_opposite_of(m.poset()) {
        return Err(Error::InvalidPoset("transpose target is not the opposite poset".into()));
    }
    let f = m.field();
    if m.is_zero() {
        return Ok(PersistenceModule::zero(target.clone(), f));
    }
    let pres = minimal_projective_presentation(m)?;
    let q0 = Arc::new(projective_sum(target, f, &pres.p0));
    let q1 = Arc::new(projective_sum(target, f, &pres.p1));
    let map = projective_morphism(q0, q1, &pres.p0, &pres.p1, &pres.matrix.transpose())?;
    Ok(cokernel(&map)?.0)
}

/// `Tr M` over a fresh copy of the opposite poset.
pub fn transpose(m: &Arc<PersistenceModule>) -> Result<PersistenceModule> {
    let op = Arc::new(m.poset().opposite());
    transpose_onto(m, &op)
}

/// `tau M = D Tr M`, over the poset of `m`.
pub fn tau(m: &Arc<PersistenceModule>) -> Result<PersistenceModule> {
    let op = Arc::new(m.poset().opposite());
    let tr = transpose_onto(m, &op)?;
    dual_onto(&tr, m.poset())
}

/// `tau^- M = Tr D M`, over the poset of `m`.
pub fn tau_inverse(m: &Arc<PersistenceModule>) -> Result<PersistenceModule> {
    let op = Arc::new(m.poset().opposite());
    let d = Arc::new(dual_onto(m, &op)?);
    transpose_onto(&d, m.poset())
}

/// Length of the minimal interval coresolution of `m`, computed as the
/// resolution length of `D m` over the opposite poset. `ip_op` must be the
/// interval poset of the opposite of the poset of `m`.
pub fn interval_codimension(m: &PersistenceModule, ip_op: &IntervalPoset) -> Result<usize> {
    let d = Arc::new(dual_onto(m, ip_op.poset())?);
    Ok(interval_resolution(&d, ip_op, default_max_depth(ip_op))?.length)
}

/// Per-interval data behind the global dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntgldimReport {
    pub value: usize,
    /// `max_I intdim tau V_I`
    pub tau_max: usize,
    /// `max_I` of the interval coresolution dimension of `tau^- V_I`
    pub tau_inverse_max: usize,
    /// `(intdim tau V_I, intcodim tau^- V_I)` in interval order.
    pub per_interval: Vec<(usize, usize)>,
}

/// `max_I intdim tau V_I`, cross-checked against the dual formula: the
/// maximum over `I` of the coresolution dimension of `tau^- V_I`.
pub fn intgldim_report(ip: &IntervalPoset, field: Field) -> Result<IntgldimReport> {
    let p = ip.poset().clone();
    let op = Arc::new(p.opposite());
    let ip_op = crate::interval::enumerate_intervals(&op);
    let depth = default_max_depth(ip);
    let per_interval = ip
        .intervals()
        .par_iter()
        .map(|iv| -> Result<(usize, usize)> {
            let v = Arc::new(PersistenceModule::from_interval(p.clone(), field, iv));
            let a = Arc::new(tau(&v)?);
            let b = tau_inverse(&v)?;
            Ok((interval_resolution(&a, ip, depth)?.length, interval_codimension(&b, &ip_op)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let tau_max = per_interval.iter().map(|r| r.0).max().unwrap_or(0);
    let tau_inverse_max = per_interval.iter().map(|r| r.1).max().unwrap_or(0);
    if tau_max != tau_inverse_max {
        return Err(Error::InternalInconsistency(format!(
            "tau maximum {tau_max} differs from tau inverse maximum {tau_inverse_max}"
        )));
    }
    Ok(IntgldimReport {
        value: tau_max,
        tau_max,
        tau_inverse_max,
        per_interval,
    })
}

pub fn intgldim(ip: &IntervalPoset, field: Field) -> Result<usize> {
    intgldim_report(ip, field).map(|r| r.value)
}
