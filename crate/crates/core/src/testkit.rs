//! Brute-force oracles and seeded generators.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::interval::IntervalPoset;
use crate::linalg::{Echelon, Field, FpMatrix};
use crate::artrans::{projective_morphism, projective_sum};
use crate::module::{cokernel, hom_basis, HomBasis, PersistenceModule};
use crate::poset::{Poset, VertexSet};

/// Deterministic generator used by every seeded routine.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every interval of `poset` by checking all subsets. Sorted like
/// `enumerate_intervals`.
pub fn oracle_intervals(poset: &Poset) -> Result<Vec<VertexSet>> {
    let n = poset.len();
    if n > 16 {
        return Err(Error::Input(format!("subset scan limited to 16 vertices, got {n}")));
    }
    let mut out: Vec<VertexSet> = (1u128..(1u128 << n))
        .map(VertexSet)
        .filter(|&s| poset.is_interval(s))
        .collect();
    out.sort_by_key(|s| s.to_vec());
    Ok(out)
}

/// A scrambled direct sum of interval modules with known multiplicities.
#[derive(Clone, Debug)]
pub struct PlantedModule {
    pub multiplicities: Vec<usize>,
    pub module: Arc<PersistenceModule>,
    pub seed: u64,
}

/// Plant between zero and `budget` random interval summands and scramble.
pub fn plant(ip: &IntervalPoset, field: Field, budget: usize, seed: u64) -> PlantedModule {
    let mut r = rng(seed);
    let count = r.gen_range(0..=budget);
    let mut multiplicities = vec![0; ip.len()];
    for _ in 0..count {
        multiplicities[r.gen_range(0..ip.len())] += 1;
    }
    plant_exact(ip, field, &multiplicities, &mut r, seed)
}

/// Scrambled `sum_J V_J^{m_J}` for the given multiplicities.
pub fn plant_exact<R: Rng>(
    ip: &IntervalPoset,
    field: Field,
    multiplicities: &[usize],
    rng: &mut R,
    seed: u64,
) -> PlantedModule {
    let p = ip.poset().clone();
    let parts: Vec<PersistenceModule> = multiplicities
        .iter()
        .enumerate()
        .flat_map(|(j, &k)| std::iter::repeat(j).take(k))
        .map(|j| PersistenceModule::from_interval(p.clone(), field, ip.get(j)))
        .collect();
    let sum = PersistenceModule::direct_sum(p, field, &parts.iter().collect::<Vec<_>>());
    PlantedModule {
        multiplicities: multiplicities.to_vec(),
        module: Arc::new(sum.scramble(rng)),
        seed,
    }
}

/// A random module with dimensions in `1..=max_dim`: at each vertex, in
/// topological order, the incoming maps are a uniformly random solution of
/// the linear commutativity constraints against everything already built.
pub fn perturbed(poset: &Arc<Poset>, field: Field, max_dim: usize, seed: u64) -> PersistenceModule {
    let mut r = rng(seed);
    let dims: Vec<usize> = (0..poset.len()).map(|_| r.gen_range(1..=max_dim.max(1))).collect();
    perturbed_with_dims(poset, field, &dims, &mut r)
}

pub fn perturbed_with_dims<R: Rng>(
    poset: &Arc<Poset>,
    field: Field,
    dims: &[usize],
    rng: &mut R,
) -> PersistenceModule {
    let n = poset.len();
    let pm = field.modulus();
    let mut maps: Vec<FpMatrix> = poset
        .edges()
        .iter()
        .map(|&(x, y)| FpMatrix::zeros(field, dims[y], dims[x]))
        .collect();
    let mut transfer: HashMap<(usize, usize), FpMatrix> = HashMap::new();
    for &y in poset.topological_order() {
        transfer.insert((y, y), FpMatrix::identity(field, dims[y]));
        let inc = poset.in_edges(y);
        if inc.is_empty() {
            continue;
        }
        let dy = dims[y];
        let mut offsets = vec![0];
        for &(x, _) in inc {
            offsets.push(offsets.last().unwrap() + dy * dims[x]);
        }
        let vars = *offsets.last().unwrap();
        // rows: for each pair of incoming edges and each common lower bound a,
        // A_i T(a, x_i) - A_j T(a, x_j) = 0
        let mut eqs: Vec<Vec<u32>> = Vec::new();
        for i in 0..inc.len() {
            for j in i + 1..inc.len() {
                let (xi, xj) = (inc[i].0, inc[j].0);
                for a in 0..n {
                    if !(poset.leq(a, xi) && poset.leq(a, xj)) {
                        continue;
                    }
                    let (ti, tj) = (&transfer[&(a, xi)], &transfer[&(a, xj)]);
                    for row in 0..dy {
                        for c in 0..dims[a] {
                            let mut eq = vec![0u32; vars];
                            for k in 0..dims[xi] {
                                let col = offsets[i] + row * dims[xi] + k;
                                eq[col] = field.add(eq[col], ti.get(k, c));
                            }
                            for k in 0..dims[xj] {
                                let col = offsets[j] + row * dims[xj] + k;
                                eq[col] = field.sub(eq[col], tj.get(k, c));
                            }
                            eqs.push(eq);
                        }
                    }
                }
            }
        }
        let sys = FpMatrix::from_vec(field, eqs.len(), vars, eqs.concat());
        let basis = sys.kernel_basis();
        let coeffs: Vec<u32> = (0..basis.cols()).map(|_| rng.gen_range(0..pm)).collect();
        let sol = basis.apply(&coeffs);
        for (idx, &(x, e)) in inc.iter().enumerate() {
            let data = sol[offsets[idx]..offsets[idx + 1]].to_vec();
            maps[e] = FpMatrix::from_vec(field, dy, dims[x], data);
        }
        for a in 0..n {
            if a == y || !poset.leq(a, y) {
                continue;
            }
            let &(x, e) = inc.iter().find(|&&(x, _)| poset.leq(a, x)).unwrap();
            let t = maps[e].mul(&transfer[&(a, x)]);
            transfer.insert((a, y), t);
        }
    }
    PersistenceModule::new(poset.clone(), field, dims.to_vec(), maps)
        .expect("constraints enforce commutativity")
}

/// The cokernel of a random map of projective sums: between one and
/// `max_gens` generators and up to `max_gens` relations at random vertices,
/// with uniformly random admissible scalars.
pub fn presented(poset: &Arc<Poset>, field: Field, max_gens: usize, seed: u64) -> PersistenceModule {
    let mut r = rng(seed);
    let n = poset.len();
    let mut gens: Vec<usize> = (0..r.gen_range(1..=max_gens.max(1))).map(|_| r.gen_range(0..n)).collect();
    let mut rels: Vec<usize> = (0..r.gen_range(0..=max_gens)).map(|_| r.gen_range(0..n)).collect();
    gens.sort_unstable();
    rels.sort_unstable();
    let mut lambda = FpMatrix::zeros(field, gens.len(), rels.len());
    for (b, &v) in gens.iter().enumerate() {
        for (a, &u) in rels.iter().enumerate() {
            if poset.leq(v, u) {
                lambda.set(b, a, r.gen_range(0..field.modulus()));
            }
        }
    }
    let p0 = Arc::new(projective_sum(poset, field, &gens));
    let p1 = Arc::new(projective_sum(poset, field, &rels));
    let map = projective_morphism(p1, p0, &rels, &gens, &lambda).expect("support respects the order");
    cokernel(&map).expect("cokernels of valid morphisms are modules").0
}

/// A random submodule of `V_I`, generated by a few random vectors.
pub fn oracle_submodule(
    poset: &Arc<Poset>,
    field: Field,
    members: VertexSet,
    seed: u64,
) -> Result<PersistenceModule> {
    let v = Arc::new(PersistenceModule::interval_module(poset.clone(), field, members)?);
    let mut r = rng(seed);
    let pts = members.to_vec();
    let count = r.gen_range(0..=3usize);
    let gens: Vec<(usize, Vec<u32>)> = (0..count)
        .map(|_| (pts[r.gen_range(0..pts.len())], vec![r.gen_range(0..field.modulus())]))
        .collect();
    Ok(v.generated_submodule(&gens)?.0)
}

/// Minimal approximation multiplicities computed from the definition:
/// `dim Hom(V_I, M)` minus the span of all composites `V_I -> V_J -> M`
/// over `J != I`, using the general intertwiner solver throughout.
pub fn naive_top_multiplicities(m: &Arc<PersistenceModule>, ip: &IntervalPoset) -> Vec<usize> {
    let p = ip.poset().clone();
    let f = m.field();
    let thin: Vec<Arc<PersistenceModule>> = ip
        .intervals()
        .iter()
        .map(|iv| Arc::new(PersistenceModule::from_interval(p.clone(), f, iv)))
        .collect();
    let to_m: Vec<HomBasis> = thin.iter().map(|v| hom_basis(v, m)).collect();
    (0..ip.len())
        .map(|i| {
            let own = &to_m[i];
            if own.dimension() == 0 {
                return 0;
            }
            let len = own.basis[0].flatten().len();
            let mut rad = Echelon::new(f, len);
            for j in 0..ip.len() {
                if j == i || to_m[j].dimension() == 0 {
                    continue;
                }
                for h in &hom_basis(&thin[i], &thin[j]).basis {
                    for g in &to_m[j].basis {
                        rad.insert(&h.then(g).flatten());
                    }
                }
            }
            own.dimension() - rad.rank()
        })
        .collect()
}
