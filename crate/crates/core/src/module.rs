//! Persistence modules over a finite poset: representations of the Hasse
//! quiver with full commutativity, their morphisms and Hom spaces.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::linalg::{Field, FpMatrix};
use crate::poset::{Poset, VertexSet};

/// A functor from a finite poset to finite-dimensional `F_p` vector spaces.
///
/// `maps[e]` is the matrix of Hasse edge `e = (x, y)`, of shape
/// `dims[y] x dims[x]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PersistenceModule {
    poset: Arc<Poset>,
    field: Field,
    dims: Vec<usize>,
    maps: Vec<FpMatrix>,
}

/// Structure maps `M(a -> b)` for every comparable pair `a <= b`.
#[derive(Clone, Debug)]
pub struct Transfers {
    n: usize,
    mats: Vec<Option<FpMatrix>>,
}

impl Transfers {
    /// `M(a -> b)`; `None` unless `a <= b`.
    pub fn get(&self, a: usize, b: usize) -> Option<&FpMatrix> {
        self.mats[a * self.n + b].as_ref()
    }

    pub fn map(&self, a: usize, b: usize) -> &FpMatrix {
        self.get(a, b).expect("transfer requested for incomparable pair")
    }
}

impl PersistenceModule {
    /// Validating constructor: matrix shapes must match `dims` and the
    /// diagram must commute.
    pub fn new(poset: Arc<Poset>, field: Field, dims: Vec<usize>, maps: Vec<FpMatrix>) -> Result<Self> {
        let m = Self::new_unchecked(poset, field, dims, maps)?;
        m.transfers_checked()?;
        Ok(m)
    }

    /// Checks shapes but not commutativity.
    pub(crate) fn new_unchecked(
        poset: Arc<Poset>,
        field: Field,
        dims: Vec<usize>,
        maps: Vec<FpMatrix>,
    ) -> Result<Self> {
        if dims.len() != poset.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} dimensions for {} vertices",
                dims.len(),
                poset.len()
            )));
        }
        if maps.len() != poset.edges().len() {
            return Err(Error::ShapeMismatch(format!(
                "{} maps for {} edges",
                maps.len(),
                poset.edges().len()
            )));
        }
        for (e, &(x, y)) in poset.edges().iter().enumerate() {
            if maps[e].shape() != (dims[y], dims[x]) {
                return Err(Error::ShapeMismatch(format!(
                    "map {}->{} has shape {:?}, expected {:?}",
                    poset.label(x),
                    poset.label(y),
                    maps[e].shape(),
                    (dims[y], dims[x])
                )));
            }
            if maps[e].field() != field {
                return Err(Error::InvalidModule("mixed fields".into()));
            }
        }
        Ok(PersistenceModule {
            poset,
            field,
            dims,
            maps,
        })
    }

    pub fn zero(poset: Arc<Poset>, field: Field) -> Self {
        let dims = vec![0; poset.len()];
        let maps = poset
            .edges()
            .iter()
            .map(|_| FpMatrix::zeros(field, 0, 0))
            .collect();
        PersistenceModule {
            poset,
            field,
            dims,
            maps,
        }
    }

    /// The thin module that is `k` with identity maps exactly on `members`.
    pub fn interval_module(poset: Arc<Poset>, field: Field, members: VertexSet) -> Result<Self> {
        Interval::new(&poset, members)?;
        Ok(Self::thin_unchecked(poset, field, members))
    }

    pub fn from_interval(poset: Arc<Poset>, field: Field, interval: &Interval) -> Self {
        Self::thin_unchecked(poset, field, interval.members())
    }

    fn thin_unchecked(poset: Arc<Poset>, field: Field, members: VertexSet) -> Self {
        let dims: Vec<usize> = (0..poset.len()).map(|x| usize::from(members.contains(x))).collect();
        let maps = poset
            .edges()
            .iter()
            .map(|&(x, y)| {
                if members.contains(x) && members.contains(y) {
                    FpMatrix::identity(field, 1)
                } else {
                    FpMatrix::zeros(field, dims[y], dims[x])
                }
            })
            .collect();
        PersistenceModule {
            poset,
            field,
            dims,
            maps,
        }
    }

    /// Indecomposable projective at `x`: the interval module on `{y >= x}`.
    pub fn projective_at(poset: Arc<Poset>, field: Field, x: usize) -> Self {
        let up = poset.up_set(x);
        debug_assert!(poset.is_interval(up));
        Self::thin_unchecked(poset, field, up)
    }

    /// Indecomposable injective at `x`: the interval module on `{y <= x}`.
    pub fn injective_at(poset: Arc<Poset>, field: Field, x: usize) -> Self {
        let down = poset.down_set(x);
        debug_assert!(poset.is_interval(down));
        Self::thin_unchecked(poset, field, down)
    }

    pub fn direct_sum(poset: Arc<Poset>, field: Field, summands: &[&PersistenceModule]) -> Self {
        let dims = (0..poset.len())
            .map(|x| summands.iter().map(|m| m.dims[x]).sum())
            .collect();
        let maps = (0..poset.edges().len())
            .map(|e| {
                let blocks: Vec<&FpMatrix> = summands.iter().map(|m| &m.maps[e]).collect();
                FpMatrix::block_diag(field, &blocks)
            })
            .collect();
        PersistenceModule {
            poset,
            field,
            dims,
            maps,
        }
    }

    /// An isomorphic copy: every space is conjugated by a random invertible
    /// matrix.
    pub fn scramble<R: Rng>(&self, rng: &mut R) -> PersistenceModule {
        let change: Vec<(FpMatrix, FpMatrix)> = self
            .dims
            .iter()
            .map(|&d| random_invertible(self.field, d, rng))
            .collect();
        let maps = self
            .poset
            .edges()
            .iter()
            .enumerate()
            .map(|(e, &(x, y))| change[y].0.mul(&self.maps[e]).mul(&change[x].1))
            .collect();
        PersistenceModule {
            poset: self.poset.clone(),
            field: self.field,
            dims: self.dims.clone(),
            maps,
        }
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, x: usize) -> usize {
        self.dims[x]
    }

    pub fn maps(&self) -> &[FpMatrix] {
        &self.maps
    }

    /// Matrix of the Hasse edge with the given id.
    pub fn edge_map(&self, e: usize) -> &FpMatrix {
        &self.maps[e]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn support(&self) -> VertexSet {
        VertexSet::from_iter((0..self.dims.len()).filter(|&x| self.dims[x] > 0))
    }

    /// Whether every pair of parallel paths induces the same map.
    pub fn check_commutativity(&self) -> bool {
        self.transfers_checked().is_ok()
    }

    /// Composite structure maps for all `a <= b`. Assumes commutativity.
    pub fn transfers(&self) -> Transfers {
        self.build_transfers(false).expect("unchecked transfers cannot fail")
    }

    /// Composite structure maps, verifying path independence along the way.
    pub fn transfers_checked(&self) -> Result<Transfers> {
        self.build_transfers(true)
    }

    fn build_transfers(&self, check: bool) -> Result<Transfers> {
        let p = &self.poset;
        let n = p.len();
        let mut mats: Vec<Option<FpMatrix>> = vec![None; n * n];
        for a in 0..n {
            mats[a * n + a] = Some(FpMatrix::identity(self.field, self.dims[a]));
            for &b in p.topological_order() {
                if b == a || !p.leq(a, b) {
                    continue;
                }
                let mut first: Option<FpMatrix> = None;
                for &(c, e) in p.in_edges(b) {
                    if !p.leq(a, c) {
                        continue;
                    }
                    let via = self.maps[e].mul(mats[a * n + c].as_ref().expect("topological order"));
                    match &first {
                        None => {
                            first = Some(via);
                            if !check {
                                break;
                            }
                        }
                        Some(f) if *f != via => {
                            return Err(Error::InvalidModule(format!(
                                "paths from {} to {} do not commute",
                                p.label(a),
                                p.label(b)
                            )));
                        }
                        Some(_) => {}
                    }
                }
                mats[a * n + b] = first;
            }
        }
        Ok(Transfers { n, mats })
    }

    /// The submodule generated by the given vectors `(vertex, vector)`,
    /// with its inclusion.
    pub fn generated_submodule(
        self: &Arc<Self>,
        generators: &[(usize, Vec<u32>)],
    ) -> Result<(PersistenceModule, ModuleMorphism)> {
        let p = self.poset.clone();
        let f = self.field;
        let mut bases: Vec<FpMatrix> = (0..p.len()).map(|x| FpMatrix::zeros(f, self.dims[x], 0)).collect();
        for &y in p.topological_order() {
            let mut cols: Vec<FpMatrix> = Vec::new();
            for (x, v) in generators.iter().filter(|(x, _)| *x == y) {
                if v.len() != self.dims[*x] {
                    return Err(Error::ShapeMismatch("generator length".into()));
                }
                cols.push(FpMatrix::column(f, v));
            }
            for &(x, e) in p.in_edges(y) {
                cols.push(self.maps[e].mul(&bases[x]));
            }
            let stacked = FpMatrix::hstack(f, self.dims[y], &cols.iter().collect::<Vec<_>>());
            bases[y] = stacked.image_basis();
        }
        let dims: Vec<usize> = bases.iter().map(|b| b.cols()).collect();
        let maps = p
            .edges()
            .iter()
            .enumerate()
            .map(|(e, &(x, y))| {
                bases[y]
                    .solve(&self.maps[e].mul(&bases[x]))
                    .expect("image lies in the generated subspace")
            })
            .collect();
        let sub = Arc::new(PersistenceModule::new(p, f, dims, maps)?);
        let incl = ModuleMorphism {
            source: sub.clone(),
            target: self.clone(),
            components: bases,
        };
        Ok((Arc::try_unwrap(sub).unwrap_or_else(|a| (*a).clone()), incl))
    }
}

fn random_invertible<R: Rng>(field: Field, d: usize, rng: &mut R) -> (FpMatrix, FpMatrix) {
    let p = field.modulus();
    loop {
        let data = (0..d * d).map(|_| rng.gen_range(0..p)).collect();
        let m = FpMatrix::from_vec(field, d, d, data);
        if let Some(inv) = m.invert() {
            return (m, inv);
        }
    }
}

/// A natural transformation between two modules over the same poset.
#[derive(Clone, Debug)]
pub struct ModuleMorphism {
    pub source: Arc<PersistenceModule>,
    pub target: Arc<PersistenceModule>,
    /// `components[x]` has shape `target.dim(x) x source.dim(x)`.
    pub components: Vec<FpMatrix>,
}

impl ModuleMorphism {
    /// Validating constructor.
    pub fn new(
        source: Arc<PersistenceModule>,
        target: Arc<PersistenceModule>,
        components: Vec<FpMatrix>,
    ) -> Result<Self> {
        let f = ModuleMorphism {
            source,
            target,
            components,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn zero(source: Arc<PersistenceModule>, target: Arc<PersistenceModule>) -> Self {
        let components = (0..source.poset.len())
            .map(|x| FpMatrix::zeros(source.field, target.dims[x], source.dims[x]))
            .collect();
        ModuleMorphism {
            source,
            target,
            components,
        }
    }

    pub fn identity(m: Arc<PersistenceModule>) -> Self {
        let components = m.dims.iter().map(|&d| FpMatrix::identity(m.field, d)).collect();
        ModuleMorphism {
            source: m.clone(),
            target: m,
            components,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.source.poset;
        if **p != *self.target.poset {
            return Err(Error::InvalidModule("morphism between different posets".into()));
        }
        if self.components.len() != p.len() {
            return Err(Error::ShapeMismatch("component count".into()));
        }
        for x in 0..p.len() {
            if self.components[x].shape() != (self.target.dims[x], self.source.dims[x]) {
                return Err(Error::ShapeMismatch(format!("component at {}", p.label(x))));
            }
        }
        for (e, &(x, y)) in p.edges().iter().enumerate() {
            let lhs = self.components[y].mul(&self.source.maps[e]);
            let rhs = self.target.maps[e].mul(&self.components[x]);
            if lhs != rhs {
                return Err(Error::InvalidModule(format!(
                    "morphism not natural along {}->{}",
                    p.label(x),
                    p.label(y)
                )));
            }
        }
        Ok(())
    }

    /// `other ∘ self`
    pub fn then(&self, other: &ModuleMorphism) -> ModuleMorphism {
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(f, g)| g.mul(f))
            .collect();
        ModuleMorphism {
            source: self.source.clone(),
            target: other.target.clone(),
            components,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(FpMatrix::is_zero)
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.components.iter().map(FpMatrix::rank).collect()
    }

    pub fn is_epi(&self) -> bool {
        self.ranks().iter().zip(&self.target.dims).all(|(r, d)| r == d)
    }

    /// Entries of all components stacked into one vector.
    pub fn flatten(&self) -> Vec<u32> {
        self.components.iter().flat_map(|c| c.data().iter().copied()).collect()
    }
}

/// A basis of `Hom(source, target)`.
#[derive(Clone, Debug)]
pub struct HomBasis {
    pub source: Arc<PersistenceModule>,
    pub target: Arc<PersistenceModule>,
    pub basis: Vec<ModuleMorphism>,
}

impl HomBasis {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// The intertwining system whose null space is `Hom(m, n)`, with the column
/// offset of each vertex block.
fn intertwiner_system(m: &PersistenceModule, n: &PersistenceModule) -> (FpMatrix, Vec<usize>) {
    let p = &m.poset;
    let f = m.field;
    let mut offsets = Vec::with_capacity(p.len() + 1);
    let mut acc = 0;
    for x in 0..p.len() {
        offsets.push(acc);
        acc += n.dims[x] * m.dims[x];
    }
    offsets.push(acc);
    let vars = acc;
    let eq_count: usize = p.edges().iter().map(|&(x, y)| n.dims[y] * m.dims[x]).sum();
    let mut sys = FpMatrix::zeros(f, eq_count, vars);
    let mut row = 0;
    for (e, &(x, y)) in p.edges().iter().enumerate() {
        let (ma, na) = (&m.maps[e], &n.maps[e]);
        let (mx, my) = (m.dims[x], m.dims[y]);
        for r in 0..n.dims[y] {
            for c in 0..mx {
                // (N(e) phi_x - phi_y M(e))[r][c] = 0
                for k in 0..n.dims[x] {
                    let v = na.get(r, k);
                    if v != 0 {
                        let col = offsets[x] + k * mx + c;
                        sys.set(row, col, f.add(sys.get(row, col), v));
                    }
                }
                for k in 0..my {
                    let v = ma.get(k, c);
                    if v != 0 {
                        let col = offsets[y] + r * my + k;
                        sys.set(row, col, f.sub(sys.get(row, col), v));
                    }
                }
                row += 1;
            }
        }
    }
    (sys, offsets)
}

/// A basis of all natural transformations `m => n`, obtained as the null
/// space of the intertwining system over every Hasse edge.
pub fn hom_basis(m: &Arc<PersistenceModule>, n: &Arc<PersistenceModule>) -> HomBasis {
    assert_eq!(*m.poset, *n.poset, "hom_basis: different posets");
    let p = &m.poset;
    let f = m.field;
    let (sys, offsets) = intertwiner_system(m, n);
    let kernel = sys.kernel_basis();
    let basis = (0..kernel.cols())
        .map(|k| {
            let components = (0..p.len())
                .map(|x| {
                    let (r, c) = (n.dims[x], m.dims[x]);
                    let data = (0..r * c).map(|i| kernel.get(offsets[x] + i, k)).collect();
                    FpMatrix::from_vec(f, r, c, data)
                })
                .collect();
            ModuleMorphism {
                source: m.clone(),
                target: n.clone(),
                components,
            }
        })
        .collect();
    HomBasis {
        source: m.clone(),
        target: n.clone(),
        basis,
    }
}

/// `dim Hom(m, n)` via rank-nullity on the intertwining system.
pub fn hom_dim(m: &PersistenceModule, n: &PersistenceModule) -> usize {
    let (sys, _) = intertwiner_system(m, n);
    sys.nullity()
}

/// Vertexwise kernel of `f` with the induced structure maps and the
/// inclusion into the source.
pub fn kernel(f: &ModuleMorphism) -> Result<(PersistenceModule, ModuleMorphism)> {
    let src = &f.source;
    let p = src.poset.clone();
    let field = src.field;
    let parts: Vec<(FpMatrix, Vec<usize>)> = f.components.iter().map(FpMatrix::kernel_with_free).collect();
    let dims: Vec<usize> = parts.iter().map(|(b, _)| b.cols()).collect();
    let maps = p
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(x, y))| src.maps[e].mul(&parts[x].0).select_rows(&parts[y].1))
        .collect();
    let k = Arc::new(PersistenceModule::new(p, field, dims, maps).map_err(|e| {
        Error::InternalInconsistency(format!("kernel is not a module: {e}"))
    })?);
    let incl = ModuleMorphism {
        source: k.clone(),
        target: src.clone(),
        components: parts.into_iter().map(|(b, _)| b).collect(),
    };
    Ok(((*k).clone(), incl))
}

/// Vertexwise cokernel of `f` with the induced structure maps and the
/// projection from the target.
pub fn cokernel(f: &ModuleMorphism) -> Result<(PersistenceModule, ModuleMorphism)> {
    let tgt = &f.target;
    let p = tgt.poset.clone();
    let field = tgt.field;
    // Q_x has identity columns at the free positions, so selecting those
    // columns gives a right inverse.
    let parts: Vec<(FpMatrix, Vec<usize>)> = f
        .components
        .iter()
        .map(|c| {
            let (b, free) = c.transpose().kernel_with_free();
            (b.transpose(), free)
        })
        .collect();
    let dims: Vec<usize> = parts.iter().map(|(q, _)| q.rows()).collect();
    let maps = p
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(x, y))| parts[y].0.mul(&tgt.maps[e]).select_cols(&parts[x].1))
        .collect();
    let c = Arc::new(PersistenceModule::new(p, field, dims, maps).map_err(|e| {
        Error::InternalInconsistency(format!("cokernel is not a module: {e}"))
    })?);
    let proj = ModuleMorphism {
        source: tgt.clone(),
        target: c.clone(),
        components: parts.into_iter().map(|(q, _)| q).collect(),
    };
    Ok(((*c).clone(), proj))
}
