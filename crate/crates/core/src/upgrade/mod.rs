//! Geometry: the homography parametrization, frame fixing, constraint
//! polynomials, and the length error metric.
//!
//! Variable `h_k` is polynomial variable `k - 1`; `h10` is the auxiliary
//! inverse of `h1 h4 h6 h9`.

mod constraints;
mod frame;
mod instance;

use thiserror::Error;

use crate::algebra::{AlgebraError, BigFloat, Field, NVARS};
use crate::text::FormatError;

pub use constraints::{build_system, det_constraint, row_forms, scale_constraint, segment_constraint};
pub use frame::{canonical_frame, RigidTransform};
pub use instance::{Anchor, Endpoint, GroundTruth, Segment, SegmentInstance, SegmentRecord, INSTANCE_HEADER};

/// Smallest number of segments that determines `H`.
pub const MIN_SEGMENTS: usize = 9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UpgradeError {
    #[error("homography parameters are singular (h1*h4*h6*h9 = 0)")]
    SingularParams,
    #[error("degenerate frame: {0}")]
    DegenerateFrame(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error(transparent)]
    Arithmetic(#[from] AlgebraError),
    #[error(transparent)]
    Format(#[from] FormatError),
}

/// `h1..h9` of the homography and optionally `h10`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomographyParams<E> {
    pub h: [E; 9],
    pub h10: Option<E>,
}

impl<E: Clone> HomographyParams<E> {
    pub fn new(h: [E; 9]) -> HomographyParams<E> {
        HomographyParams { h, h10: None }
    }

    /// `h_k` for `k` in `1..=9`.
    pub fn get(&self, k: usize) -> &E {
        &self.h[k - 1]
    }

    fn det_product<F: Field<Elem = E>>(&self, field: &F) -> E {
        let m = field.mul(self.get(1), self.get(4));
        let m = field.mul(&m, self.get(6));
        field.mul(&m, self.get(9))
    }

    /// Sets `h10 = 1 / (h1 h4 h6 h9)`.
    pub fn with_h10<F: Field<Elem = E>>(mut self, field: &F) -> Result<Self, UpgradeError> {
        let det = self.det_product(field);
        if field.is_zero(&det) {
            return Err(UpgradeError::SingularParams);
        }
        self.h10 = Some(field.inv(&det)?);
        Ok(self)
    }

    /// Multiplies `h1..h9` by `s`, keeping `h10` consistent.
    pub fn scaled<F: Field<Elem = E>>(&self, field: &F, s: &E) -> Result<Self, UpgradeError> {
        let scaled = HomographyParams::new(std::array::from_fn(|k| field.mul(&self.h[k], s)));
        if self.h10.is_some() {
            scaled.with_h10(field)
        } else {
            Ok(scaled)
        }
    }

    /// The point `(h1, ..., h10)` for polynomial evaluation; a missing
    /// `h10` evaluates as zero.
    pub fn as_point<F: Field<Elem = E>>(&self, field: &F) -> [E; NVARS] {
        std::array::from_fn(|k| match k {
            9 => self.h10.clone().unwrap_or_else(|| field.zero()),
            _ => self.h[k].clone(),
        })
    }
}

/// Rows `(h1,h2,h3,0)`, `(0,h4,h5,0)`, `(0,0,h6,0)`, `(h1-h9,h7,h8,h9)`.
pub fn homography_matrix<F: Field>(
    field: &F,
    params: &HomographyParams<F::Elem>,
) -> Result<[[F::Elem; 4]; 4], UpgradeError> {
    if field.is_zero(&params.det_product(field)) {
        return Err(UpgradeError::SingularParams);
    }
    let h = |k: usize| params.get(k).clone();
    let z = field.zero();
    Ok([
        [h(1), h(2), h(3), z.clone()],
        [z.clone(), h(4), h(5), z.clone()],
        [z.clone(), z.clone(), h(6), z],
        [field.sub(&h(1), &h(9)), h(7), h(8), h(9)],
    ])
}

/// Image of a point under `H`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mapped<E> {
    pub point: [E; 4],
    /// The fourth coordinate vanished, so the point was left unnormalized.
    pub at_infinity: bool,
}

/// `H p`, affinely normalized when the fourth coordinate is nonzero.
pub fn apply_homography<F: Field>(
    field: &F,
    params: &HomographyParams<F::Elem>,
    p: &[F::Elem; 4],
) -> Result<Mapped<F::Elem>, UpgradeError> {
    let m = homography_matrix(field, params)?;
    let q: [F::Elem; 4] = std::array::from_fn(|r| {
        (0..4).fold(field.zero(), |acc, c| field.add(&acc, &field.mul(&m[r][c], &p[c])))
    });
    if field.is_zero(&q[3]) {
        return Ok(Mapped {
            point: q,
            at_infinity: true,
        });
    }
    let w = field.inv(&q[3])?;
    Ok(Mapped {
        point: std::array::from_fn(|k| if k == 3 { field.one() } else { field.mul(&q[k], &w) }),
        at_infinity: false,
    })
}

/// Euclidean distance between the affine parts of two finite points with
/// fourth coordinate 1.
pub fn distance(a: &[BigFloat; 4], b: &[BigFloat; 4]) -> BigFloat {
    let sq = (0..3)
        .map(|k| {
            let d = a[k].sub(&b[k]);
            d.mul(&d)
        })
        .fold(BigFloat::zero(a[0].precision()), |acc, x| acc.add(&x));
    sq.sqrt().expect("sum of squares is non-negative")
}

/// Lengths of the segments after applying `params`; `None` where an
/// endpoint maps to infinity.
pub fn upgraded_lengths(
    field: &crate::algebra::FloatField,
    params: &HomographyParams<BigFloat>,
    segments: &[Segment<BigFloat>],
) -> Result<Vec<Option<BigFloat>>, UpgradeError> {
    segments
        .iter()
        .map(|s| {
            let x = apply_homography(field, params, &s.x)?;
            let y = apply_homography(field, params, &s.y)?;
            Ok((!x.at_infinity && !y.at_infinity).then(|| distance(&x.point, &y.point)))
        })
        .collect()
}

/// Population standard deviation of `d_i - d'_i` divided by the mean of `d_i`.
pub fn length_error(truth: &[BigFloat], upgraded: &[BigFloat]) -> BigFloat {
    assert_eq!(truth.len(), upgraded.len());
    assert!(!truth.is_empty());
    let prec = truth[0].precision();
    let n = BigFloat::from_i64(truth.len() as i64, prec);
    let sum = |xs: &mut dyn Iterator<Item = BigFloat>| xs.fold(BigFloat::zero(prec), |a, x| a.add(&x));
    let diffs: Vec<BigFloat> = truth.iter().zip(upgraded).map(|(d, u)| d.sub(u)).collect();
    let mean_diff = sum(&mut diffs.iter().cloned()).div(&n).unwrap();
    let var = sum(&mut diffs.iter().map(|e| {
        let c = e.sub(&mean_diff);
        c.mul(&c)
    }))
    .div(&n)
    .unwrap();
    let mean_d = sum(&mut truth.iter().cloned()).div(&n).unwrap();
    var.sqrt().unwrap().div(&mean_d).expect("lengths are positive")
}
