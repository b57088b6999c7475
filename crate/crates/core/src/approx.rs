//! Minimal right interval approximations and minimal interval resolutions.
//!
//! `Hom(V_I, M)` is stored in minima coordinates: a morphism is determined by
//! the images `u_m in M(m)` of the generator at the minimal elements `m` of
//! `I`. The value at any other `x in I` is `M(m -> x) u_m` for any minimum
//! below `x`, and well-definedness plus vanishing across the exit edges of
//! `I` cut out the subspace.
//!
//! Radical generators: a non-isomorphism `V_I -> V_J` is either not injective,
//! in which case it factors through `V_I -> V_{I \ {z}}` for a maximal `z`, or
//! it is an inclusion with `I` up-closed in `J`, which factors through an
//! inclusion into some irreducible such `J`.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::interval::IntervalPoset;
use crate::linalg::{Echelon, FpMatrix};
use crate::module::{kernel, ModuleMorphism, PersistenceModule, Transfers};

/// Module-independent data for one interval.
#[derive(Clone, Debug)]
pub(crate) struct IntervalPlan {
    mins: Vec<usize>,
    /// Members with at least two minima below them, with those minima.
    agree: Vec<(usize, Vec<usize>)>,
    /// Targets of exit edges, each with one minimum below the source.
    exits: Vec<(usize, usize)>,
    /// Every member with one minimum below it.
    reach: Vec<(usize, usize)>,
    /// Components of `I \ {z}` over maximal `z`.
    quotients: Vec<usize>,
    /// Irreducible `J` containing `I` as an up-closed subset.
    inclusions: Vec<usize>,
}

impl IntervalPlan {
    fn reach_of(&self, x: usize) -> Option<usize> {
        self.reach.iter().find(|&&(y, _)| y == x).map(|&(_, k)| k)
    }
}

pub(crate) fn plans(ip: &IntervalPoset) -> &[IntervalPlan] {
    ip.plans
        .get_or_init(|| (0..ip.len()).into_par_iter().map(|i| build_plan(ip, i)).collect())
}

fn build_plan(ip: &IntervalPoset, i: usize) -> IntervalPlan {
    let p = ip.poset();
    let members = ip.get(i).members();
    let mins = p.minimal_elements(members).to_vec();
    let mut agree = Vec::new();
    let mut exits: Vec<(usize, usize)> = Vec::new();
    let mut reach = Vec::new();
    for x in members.iter() {
        let below: Vec<usize> = (0..mins.len()).filter(|&k| p.leq(mins[k], x)).collect();
        reach.push((x, below[0]));
        for &(y, _) in p.out_edges(x) {
            if !members.contains(y) && !exits.contains(&(y, below[0])) {
                exits.push((y, below[0]));
            }
        }
        if below.len() > 1 {
            agree.push((x, below));
        }
    }

    let mut quotients = Vec::new();
    for z in p.maximal_elements(members).iter() {
        let mut rest = members;
        rest.remove(z);
        for d in p.components(rest) {
            let idx = ip.index_of(d).expect("component of a down-closed part is an interval");
            if !quotients.contains(&idx) {
                quotients.push(idx);
            }
        }
    }

    let up = p.up_closure(members);
    let anchor = members.first().expect("intervals are nonempty");
    let inclusions = (0..ip.len())
        .filter(|&j| {
            let big = ip.get(j).members();
            if big == members || !members.is_subset(big) || !big.intersection(up).is_subset(members) {
                return false;
            }
            p.minimal_elements(big).difference(members).iter().all(|w| {
                let mut rest = big;
                rest.remove(w);
                p.component(rest, anchor) == members
            })
        })
        .collect();

    IntervalPlan {
        mins,
        agree,
        exits,
        reach,
        quotients,
        inclusions,
    }
}

/// A basis of `Hom(V_I, M)` in minima coordinates.
#[derive(Clone, Debug)]
struct LocalHom {
    offsets: Vec<usize>,
    /// Columns are basis vectors of length `offsets.last()`.
    basis: FpMatrix,
}

impl LocalHom {
    fn len(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    fn dim(&self) -> usize {
        self.basis.cols()
    }

    fn block(&self, v: &[u32], k: usize) -> Vec<u32> {
        v[self.offsets[k]..self.offsets[k + 1]].to_vec()
    }
}

fn add_block(sys: &mut FpMatrix, r0: usize, c0: usize, block: &FpMatrix, negate: bool) {
    let f = sys.field();
    for r in 0..block.rows() {
        for c in 0..block.cols() {
            let v = block.get(r, c);
            if v != 0 {
                let v = if negate { f.neg(v) } else { v };
                let old = sys.get(r0 + r, c0 + c);
                sys.set(r0 + r, c0 + c, f.add(old, v));
            }
        }
    }
}

fn local_hom(m: &PersistenceModule, t: &Transfers, plan: &IntervalPlan) -> LocalHom {
    let f = m.field();
    let mut offsets = vec![0];
    for &v in &plan.mins {
        offsets.push(offsets.last().unwrap() + m.dim(v));
    }
    let len = *offsets.last().unwrap();
    let rows: usize = plan
        .agree
        .iter()
        .map(|(x, ks)| m.dim(*x) * (ks.len() - 1))
        .chain(plan.exits.iter().map(|&(y, _)| m.dim(y)))
        .sum();
    let mut sys = FpMatrix::zeros(f, rows, len);
    let mut r = 0;
    for (x, ks) in &plan.agree {
        let d = m.dim(*x);
        if d == 0 {
            continue;
        }
        let first = t.map(plan.mins[ks[0]], *x);
        for &k in &ks[1..] {
            add_block(&mut sys, r, offsets[ks[0]], first, false);
            add_block(&mut sys, r, offsets[k], t.map(plan.mins[k], *x), true);
            r += d;
        }
    }
    for &(y, k) in &plan.exits {
        add_block(&mut sys, r, offsets[k], t.map(plan.mins[k], y), false);
        r += m.dim(y);
    }
    LocalHom {
        offsets,
        basis: sys.kernel_basis(),
    }
}

fn local_homs(m: &PersistenceModule, t: &Transfers, ip: &IntervalPoset) -> Vec<LocalHom> {
    let plans = plans(ip);
    plans.par_iter().map(|plan| local_hom(m, t, plan)).collect()
}

/// `dim Hom(V_I, M)` for every interval `I`, in interval order.
pub fn interval_hom_dims(m: &PersistenceModule, ip: &IntervalPoset) -> Vec<usize> {
    let t = m.transfers();
    local_homs(m, &t, ip).iter().map(LocalHom::dim).collect()
}

/// Representatives of a basis of `Hom(V_I, M) / rad`, in minima coordinates.
fn top_representatives(
    t: &Transfers,
    ip: &IntervalPoset,
    homs: &[LocalHom],
    i: usize,
) -> Vec<Vec<u32>> {
    let plans = plans(ip);
    let plan = &plans[i];
    let hom = &homs[i];
    let h = hom.dim();
    if h == 0 {
        return Vec::new();
    }
    let f = hom.basis.field();
    let p = ip.poset();
    let mut rad = Echelon::new(f, hom.len());

    for &d in &plan.quotients {
        let (dp, dh) = (&plans[d], &homs[d]);
        let slots: Vec<usize> = dp
            .mins
            .iter()
            .map(|md| plan.mins.iter().position(|m| m == md).expect("quotient minima are minima"))
            .collect();
        for c in 0..dh.dim() {
            let g = dh.basis.col(c);
            let mut v = vec![0; hom.len()];
            for (kd, &k) in slots.iter().enumerate() {
                v[hom.offsets[k]..hom.offsets[k + 1]].copy_from_slice(&dh.block(&g, kd));
            }
            rad.insert(&v);
            if rad.rank() == h {
                return Vec::new();
            }
        }
    }

    for &j in &plan.inclusions {
        let (jp, jh) = (&plans[j], &homs[j]);
        let sources: Vec<usize> = plan
            .mins
            .iter()
            .map(|&m| {
                (0..jp.mins.len())
                    .find(|&kj| p.leq(jp.mins[kj], m))
                    .expect("every member lies above a minimum")
            })
            .collect();
        for c in 0..jh.dim() {
            let g = jh.basis.col(c);
            let mut v = Vec::with_capacity(hom.len());
            for (k, &m) in plan.mins.iter().enumerate() {
                let kj = sources[k];
                v.extend(t.map(jp.mins[kj], m).apply(&jh.block(&g, kj)));
            }
            rad.insert(&v);
            if rad.rank() == h {
                return Vec::new();
            }
        }
    }

    (0..h)
        .filter_map(|c| {
            let v = hom.basis.col(c);
            rad.insert(&v).then_some(v)
        })
        .collect()
}

/// Multiplicity of each `V_I` in the minimal right interval approximation.
pub fn top_multiplicities(m: &PersistenceModule, ip: &IntervalPoset) -> Vec<usize> {
    let t = m.transfers();
    let homs = local_homs(m, &t, ip);
    (0..ip.len())
        .into_par_iter()
        .map(|i| top_representatives(&t, ip, &homs, i).len())
        .collect()
}

/// One step `X -> M` of an interval resolution.
#[derive(Clone, Debug)]
pub struct ApproximationStep {
    /// `multiplicities[i]` is the number of copies of interval `i` in `X`.
    pub multiplicities: Vec<usize>,
    /// Interval index of each summand of `X`, in block order.
    pub summands: Vec<usize>,
    pub cover: ModuleMorphism,
    pub kernel: Arc<PersistenceModule>,
    pub inclusion: ModuleMorphism,
}

fn check_same_poset(m: &PersistenceModule, ip: &IntervalPoset) -> Result<()> {
    if **m.poset() != **ip.poset() {
        return Err(Error::InvalidModule("module and interval poset live on different posets".into()));
    }
    Ok(())
}

/// The minimal right interval approximation of `m`, with its kernel.
pub fn minimal_right_interval_approximation(
    m: &Arc<PersistenceModule>,
    ip: &IntervalPoset,
) -> Result<ApproximationStep> {
    check_same_poset(m, ip)?;
    let p = ip.poset().clone();
    let f = m.field();
    let plans = plans(ip);
    let t = m.transfers();
    let homs = local_homs(m, &t, ip);
    let reps: Vec<Vec<Vec<u32>>> = (0..ip.len())
        .into_par_iter()
        .map(|i| top_representatives(&t, ip, &homs, i))
        .collect();

    let multiplicities: Vec<usize> = reps.iter().map(Vec::len).collect();
    let mut summands = Vec::new();
    let mut blocks = Vec::new();
    for (i, rs) in reps.iter().enumerate() {
        for r in rs {
            summands.push(i);
            blocks.push(r);
        }
    }
    let thin: Vec<PersistenceModule> = summands
        .iter()
        .map(|&i| PersistenceModule::from_interval(p.clone(), f, ip.get(i)))
        .collect();
    let source = Arc::new(PersistenceModule::direct_sum(p.clone(), f, &thin.iter().collect::<Vec<_>>()));
    let components = (0..p.len())
        .map(|x| {
            let cols: Vec<FpMatrix> = summands
                .iter()
                .zip(&blocks)
                .filter_map(|(&i, u)| {
                    let plan = &plans[i];
                    let k = plan.reach_of(x)?;
                    let image = t.map(plan.mins[k], x).apply(&homs[i].block(u, k));
                    Some(FpMatrix::column(f, &image))
                })
                .collect();
            FpMatrix::hstack(f, m.dim(x), &cols.iter().collect::<Vec<_>>())
        })
        .collect();
    let cover = ModuleMorphism {
        source,
        target: m.clone(),
        components,
    };
    let (k, inclusion) = kernel(&cover)?;
    Ok(ApproximationStep {
        multiplicities,
        summands,
        cover,
        kernel: inclusion.source.clone(),
        inclusion: {
            debug_assert_eq!(*inclusion.source, k);
            inclusion
        },
    })
}

/// A minimal interval resolution `0 -> X_r -> ... -> X_0 -> M -> 0`.
#[derive(Clone, Debug)]
pub struct IntervalResolution {
    pub module: Arc<PersistenceModule>,
    pub steps: Vec<ApproximationStep>,
    pub length: usize,
}

impl IntervalResolution {
    /// `d_J^{(i)}` for every interval `J` (outer index) and step `i`.
    pub fn table(&self, interval_count: usize) -> Vec<Vec<usize>> {
        (0..interval_count)
            .map(|j| self.steps.iter().map(|s| s.multiplicities[j]).collect())
            .collect()
    }

    /// The differential `X_i -> X_{i-1}`, or the cover `X_0 -> M` for `i = 0`.
    pub fn differential(&self, i: usize) -> ModuleMorphism {
        if i == 0 {
            self.steps[0].cover.clone()
        } else {
            self.steps[i].cover.then(&self.steps[i - 1].inclusion)
        }
    }
}

/// Generous default budget: `|P|` times the number of intervals.
pub fn default_max_depth(ip: &IntervalPoset) -> usize {
    ip.poset().len() * ip.len()
}

/// Iterate minimal approximations on successive kernels until the kernel
/// vanishes. Fails with `DepthExceeded` if the length would exceed
/// `max_depth`.
pub fn interval_resolution(
    m: &Arc<PersistenceModule>,
    ip: &IntervalPoset,
    max_depth: usize,
) -> Result<IntervalResolution> {
    check_same_poset(m, ip)?;
    let mut steps: Vec<ApproximationStep> = Vec::new();
    let mut current = m.clone();
    while !current.is_zero() {
        if steps.len() > max_depth {
            return Err(Error::DepthExceeded { max_depth });
        }
        let step = minimal_right_interval_approximation(&current, ip)?;
        if !step.cover.is_epi() {
            return Err(Error::InternalInconsistency("approximation is not surjective".into()));
        }
        current = step.kernel.clone();
        steps.push(step);
    }
    if steps.len() > max_depth + 1 {
        return Err(Error::DepthExceeded { max_depth });
    }
    let length = steps.len().saturating_sub(1);
    Ok(IntervalResolution {
        module: m.clone(),
        steps,
        length,
    })
}

/// Length of the minimal interval resolution; `0` for the zero module.
pub fn interval_dimension(m: &Arc<PersistenceModule>, ip: &IntervalPoset) -> Result<usize> {
    interval_resolution(m, ip, default_max_depth(ip)).map(|r| r.length)
}

/// `J -> sum_i (-1)^i d_J^{(i)}`.
pub fn euler_profile(res: &IntervalResolution, interval_count: usize) -> Vec<i64> {
    let mut out = vec![0i64; interval_count];
    for (i, step) in res.steps.iter().enumerate() {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        for (j, &d) in step.multiplicities.iter().enumerate() {
            out[j] += sign * d as i64;
        }
    }
    out
}

/// Outcome of the soundness checks on a resolution.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SoundnessReport {
    pub exact: bool,
    pub surjective: bool,
    pub approximation: bool,
    pub violations: Vec<String>,
}

impl SoundnessReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Whether `Hom(V_K, cover)` is onto `Hom(V_K, target)` for every `K`;
/// returns the offending interval indices.
pub fn approximation_failures(cover: &ModuleMorphism, ip: &IntervalPoset) -> Vec<usize> {
    let plans = plans(ip);
    let (src, tgt) = (&cover.source, &cover.target);
    let ts = src.transfers();
    let tt = tgt.transfers();
    (0..ip.len())
        .into_par_iter()
        .filter(|&k| {
            let plan = &plans[k];
            let hs = local_hom(src, &ts, plan);
            let ht = local_hom(tgt, &tt, plan);
            let f = tgt.field();
            let cols: Vec<FpMatrix> = (0..hs.dim())
                .map(|c| {
                    let u = hs.basis.col(c);
                    let mut v = Vec::with_capacity(ht.len());
                    for (b, &m) in plan.mins.iter().enumerate() {
                        v.extend(cover.components[m].apply(&hs.block(&u, b)));
                    }
                    FpMatrix::column(f, &v)
                })
                .collect();
            let image = FpMatrix::hstack(f, ht.len(), &cols.iter().collect::<Vec<_>>());
            image.rank() != ht.dim()
        })
        .collect()
}

/// Vertexwise exactness, surjectivity of the cover and the approximation
/// property at every step.
pub fn verify_resolution(res: &IntervalResolution, ip: &IntervalPoset) -> SoundnessReport {
    let mut report = SoundnessReport {
        exact: true,
        surjective: true,
        approximation: true,
        violations: Vec::new(),
    };
    let p = ip.poset();
    let r = res.steps.len();
    let diffs: Vec<ModuleMorphism> = (0..r).map(|i| res.differential(i)).collect();
    let ranks: Vec<Vec<usize>> = diffs.iter().map(ModuleMorphism::ranks).collect();
    for x in 0..p.len() {
        if r == 0 {
            if res.module.dim(x) != 0 {
                report.exact = false;
                report.violations.push(format!("empty resolution of a nonzero module at {}", p.label(x)));
            }
            continue;
        }
        if ranks[0][x] != res.module.dim(x) {
            report.exact = false;
            report.violations.push(format!("not exact at M, vertex {}", p.label(x)));
        }
        for i in 0..r {
            let next = if i + 1 < r { ranks[i + 1][x] } else { 0 };
            let nullity = res.steps[i].cover.source.dim(x) - ranks[i][x];
            if next != nullity {
                report.exact = false;
                report.violations.push(format!("not exact at X_{i}, vertex {}", p.label(x)));
            }
        }
    }
    for i in 1..r {
        if !diffs[i].then(&diffs[i - 1]).is_zero() {
            report.exact = false;
            report.violations.push(format!("d_{} d_{i} is nonzero", i - 1));
        }
    }
    for (i, step) in res.steps.iter().enumerate() {
        if !step.cover.is_epi() {
            report.surjective = false;
            report.violations.push(format!("cover {i} is not surjective"));
        }
        let bad = approximation_failures(&step.cover, ip);
        if !bad.is_empty() {
            report.approximation = false;
            for k in bad {
                report
                    .violations
                    .push(format!("step {i}: Hom from {} not onto", ip.get(k).describe(p)));
            }
        }
    }
    report
}
