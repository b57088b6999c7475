//! Compression of modules over commutative ladders `G(n, 2)` to the
//! five-vertex zigzag `1 <- 2 -> 3 <- 4 -> 5`, and the resulting
//! compressed multiplicities and their Mobius inversion.
//!
//! Ladder notation: `x_i = (i, 1)` is the lower row, `y_i = (i, 2)` the upper.

use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalPoset};
use crate::linalg::{Field, FpMatrix};
use crate::module::{hom_dim, PersistenceModule, Transfers};
use crate::poset::{Poset, VertexSet};

/// Arrows of the zigzag as `(source, target)` vertex indices `0..5`
/// (vertex `k` is labelled `k + 1`).
pub const ZIGZAG_ARROWS: [(usize, usize); 4] = [(1, 0), (1, 2), (3, 2), (3, 4)];

/// The zigzag as a poset; its Hasse edge ids coincide with the arrow order.
pub fn zigzag_poset() -> &'static Arc<Poset> {
    static Q: OnceLock<Arc<Poset>> = OnceLock::new();
    Q.get_or_init(|| {
        let labels = (1..=5).map(|k| k.to_string()).collect();
        let p = Poset::from_relations(labels, &ZIGZAG_ARROWS).expect("zigzag is a poset");
        debug_assert_eq!(p.edges(), &ZIGZAG_ARROWS);
        Arc::new(p)
    })
}

/// The zigzag interval `<i, j>` with `1 <= i <= j <= 5`.
pub fn zigzag_interval(field: Field, i: usize, j: usize) -> PersistenceModule {
    let q = zigzag_poset().clone();
    PersistenceModule::interval_module(q, field, VertexSet::from_iter(i - 1..j)).expect("zigzag segments are intervals")
}

/// A quiver morphism from the zigzag into a ladder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XiMorphism {
    pub vertex_images: [usize; 5],
    /// Image of each arrow as a segment `(from, to)` of the ladder.
    pub arrow_images: [(usize, usize); 4],
}

fn ladder_length(p: &Poset) -> Result<usize> {
    match p.grid_shape() {
        Some((n, 2)) => Ok(n),
        _ => Err(Error::InvalidPoset("expected a ladder G(n,2)".into())),
    }
}

/// The morphism attached to an interval of a ladder.
pub fn xi(interval: &Interval, ladder: &Poset) -> Result<XiMorphism> {
    ladder_length(ladder)?;
    let row_span = |row: usize| -> Option<(usize, usize)> {
        let cols: Vec<usize> = interval
            .members()
            .iter()
            .filter_map(|v| ladder.grid_coords(v))
            .filter(|&(_, j)| j == row)
            .map(|(i, _)| i)
            .collect();
        Some((*cols.iter().min()?, *cols.iter().max()?))
    };
    let x = |i: usize| ladder.grid_vertex(i, 1).unwrap();
    let y = |i: usize| ladder.grid_vertex(i, 2).unwrap();
    let v = match (row_span(1), row_span(2)) {
        (Some((i, j)), Some((k, l))) => [y(l), y(k), y(i), x(i), x(j)],
        (Some((i, j)), None) => [x(j), x(i), x(i), x(i), x(j)],
        (None, Some((k, l))) => [y(l), y(k), y(k), y(k), y(l)],
        (None, None) => return Err(Error::NotAnInterval("empty set".into())),
    };
    let arrow_images = ZIGZAG_ARROWS.map(|(s, t)| (v[s], v[t]));
    for &(a, b) in &arrow_images {
        if !ladder.leq(a, b) {
            return Err(Error::InternalInconsistency("xi arrow is not a segment".into()));
        }
    }
    Ok(XiMorphism {
        vertex_images: v,
        arrow_images,
    })
}

/// A representation of the zigzag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZigzagModule(pub PersistenceModule);

impl ZigzagModule {
    pub fn new(field: Field, dims: [usize; 5], maps: [FpMatrix; 4]) -> Result<Self> {
        PersistenceModule::new(zigzag_poset().clone(), field, dims.to_vec(), maps.to_vec()).map(ZigzagModule)
    }

    pub fn dims(&self) -> &[usize] {
        self.0.dims()
    }

    /// Matrix of arrow `alpha_{k+1}`.
    pub fn map(&self, k: usize) -> &FpMatrix {
        self.0.edge_map(k)
    }

    pub fn module(&self) -> &PersistenceModule {
        &self.0
    }
}

fn compress_with(m: &PersistenceModule, t: &Transfers, xi: &XiMorphism) -> ZigzagModule {
    let dims = xi.vertex_images.map(|v| m.dim(v));
    let maps = xi.arrow_images.map(|(a, b)| t.map(a, b).clone());
    ZigzagModule(
        PersistenceModule::new(zigzag_poset().clone(), m.field(), dims.to_vec(), maps.to_vec())
            .expect("a tree has no commutativity constraints"),
    )
}

/// `M` composed with the functor induced by `xi_I`.
pub fn compress(m: &PersistenceModule, interval: &Interval) -> Result<ZigzagModule> {
    let x = xi(interval, m.poset())?;
    Ok(compress_with(m, &m.transfers(), &x))
}

/// Multiplicity of `<1,5>` as a summand, via the almost split sequence
/// `0 -> <1,5> -> <2,5> + <1,4> -> <2,4> -> 0`.
pub fn zigzag_top_multiplicity(n: &ZigzagModule) -> usize {
    let f = n.0.field();
    let h = |i, j| hom_dim(&zigzag_interval(f, i, j), &n.0) as i64;
    let c = h(1, 5) - h(2, 5) - h(1, 4) + h(2, 4);
    usize::try_from(c).expect("summand multiplicity is nonnegative")
}

pub fn compressed_multiplicity(m: &PersistenceModule, interval: &Interval) -> Result<usize> {
    Ok(zigzag_top_multiplicity(&compress(m, interval)?))
}

/// Compressed multiplicities and their Mobius inversion, in interval order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompressedProfile {
    pub c: Vec<usize>,
    pub delta: Vec<i64>,
}

/// `c(I)` for every interval, then
/// `delta(J) = sum over S subset of cov(J) of (-1)^|S| c(join(S + {J}))`.
pub fn interval_approximation_delta(m: &PersistenceModule, ip: &IntervalPoset) -> Result<CompressedProfile> {
    ladder_length(m.poset())?;
    if **m.poset() != **ip.poset() {
        return Err(Error::InvalidModule("module and interval poset live on different posets".into()));
    }
    let t = m.transfers();
    let c = ip
        .intervals()
        .par_iter()
        .map(|iv| -> Result<usize> {
            let x = xi(iv, m.poset())?;
            Ok(zigzag_top_multiplicity(&compress_with(m, &t, &x)))
        })
        .collect::<Result<Vec<_>>>()?;
    let delta = (0..ip.len())
        .map(|j| -> Result<i64> {
            let cov = ip.covers(j);
            let mut total = 0i64;
            for mask in 0u32..(1 << cov.len()) {
                let mut s = vec![j];
                s.extend((0..cov.len()).filter(|b| mask >> b & 1 == 1).map(|b| cov[b]));
                let top = ip.join(&s).ok_or_else(|| {
                    Error::JoinMissing(
                        s.iter()
                            .map(|&k| ip.get(k).describe(ip.poset()))
                            .collect::<Vec<_>>()
                            .join(", "),
                    )
                })?;
                let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
                total += sign * c[top] as i64;
            }
            Ok(total)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CompressedProfile { c, delta })
}
