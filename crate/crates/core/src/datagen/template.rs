use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use super::{enumerate_quadruples, DatagenError, GenerationConfig, RNG_NAME};
use crate::upgrade::{Anchor, GroundTruth, SegmentInstance, SegmentRecord};

/// `H^{-1} p` scaled to coprime integers, or `None` for a point at infinity.
pub(crate) fn distort_integer(h: &[i128; 9], p: [i128; 4]) -> Option<[i128; 4]> {
    let [h1, h2, h3, h4, h5, h6, h7, h8, h9] = *h;
    let [x1, x2, x3, x4] = p;
    let t = x2 * h6 - h5 * x3;
    let a = x1 * h4 * h6 - h2 * t - h3 * h4 * x3;
    let b = h1 * t;
    let c = x3 * h1 * h4;
    let e = h1 * h4 * h6 * x4 - (h1 - h9) * a - h7 * b - h8 * c;
    if e == 0 {
        return None;
    }
    let mut q = [h9 * a, h9 * b, h9 * c, e];
    let g = q.iter().fold(0i128, |g, &v| num_integer::gcd(g, v));
    for v in &mut q {
        *v /= g;
    }
    Some(q)
}

fn nonzero(rng: &mut impl Rng, bound: i64) -> i64 {
    let v = rng.random_range(1..bound);
    if rng.random_bool(0.5) {
        -v
    } else {
        v
    }
}

/// Distorted endpoints of one segment, or `None` when a coordinate outside
/// the frame pattern came out zero (or a point went to infinity).
fn distort_segment(h: &[i128; 9], x: &[i64; 3], y: &[i64; 3], index: usize) -> Option<SegmentRecord> {
    let lift = |p: &[i64; 3]| [p[0] as i128, p[1] as i128, p[2] as i128, 1];
    let xh = distort_integer(h, lift(x))?;
    let yh = distort_integer(h, lift(y))?;
    // Away from the frame pattern every distorted coordinate must be
    // nonzero, or the system loses terms the template relies on.
    let frame_zero = |end: usize, k: usize| match (index, end) {
        (0, 0) => k < 3,
        (0, 1) => k == 1 || k == 2,
        (1, 0) => k == 2,
        _ => false,
    };
    for (end, p) in [xh, yh].iter().enumerate() {
        for (k, &v) in p.iter().enumerate() {
            if (v == 0) != frame_zero(end, k) {
                return None;
            }
        }
    }
    let d: i64 = (0..3).map(|k| (x[k] - y[k]).pow(2)).sum();
    let s = |p: [i128; 4]| p.map(|v| v.to_string());
    Some(SegmentRecord {
        x: s(xh),
        y: s(yh),
        d: num_integer::Roots::sqrt(&d).to_string(),
    })
}

/// One attempt with a fixed homography and quadruple choice; each segment
/// is resampled on its own. `None` asks for a fresh homography.
fn attempt(config: &GenerationConfig, rng: &mut impl Rng, quads: &[super::PythagoreanQuadruple]) -> Option<SegmentInstance> {
    let n = config.n;
    let bound = config.coordinate_bound;
    let in_range = |v: i64| v != 0 && v.abs() < bound;
    let tries = config.max_resamples;

    let h: [i64; 9] = std::array::from_fn(|_| rng.random_range(1..config.h_bound));
    let hw = h.map(|v| v as i128);
    let chosen: Vec<_> = quads.choose_multiple(rng, n - 1).copied().collect();
    let mut truth: Vec<([i64; 3], [i64; 3])> = Vec::with_capacity(n);
    let mut segments = Vec::with_capacity(n);

    let first = (0..tries).find_map(|_| {
        let y11 = nonzero(rng, bound);
        // (1,0,0,1) is fixed by every Eq.-1-form H, so a unit first segment
        // ending there says nothing about H and its constraint vanishes.
        if y11 == 1 {
            return None;
        }
        let (x, y) = ([0, 0, 0], [y11, 0, 0]);
        distort_segment(&hw, &x, &y, 0).map(|rec| (x, y, rec))
    })?;
    truth.push((first.0, first.1));
    segments.push(first.2);

    for (k, q) in chosen.iter().enumerate() {
        let index = k + 1;
        let found = (0..tries).find_map(|_| {
            let mut offset = [q.a, q.b, q.c];
            offset.shuffle(rng);
            for v in &mut offset {
                if rng.random_bool(0.5) {
                    *v = -*v;
                }
            }
            let x = if index == 1 {
                [nonzero(rng, bound), nonzero(rng, bound), 0]
            } else {
                [nonzero(rng, bound), nonzero(rng, bound), nonzero(rng, bound)]
            };
            let y = [x[0] - offset[0], x[1] - offset[1], x[2] - offset[2]];
            if !y.iter().all(|&v| in_range(v)) {
                return None;
            }
            distort_segment(&hw, &x, &y, index).map(|rec| (x, y, rec))
        })?;
        truth.push((found.0, found.1));
        segments.push(found.2);
    }

    let s3 = |p: &[i64; 3]| p.map(|v| v.to_string());
    Some(SegmentInstance {
        kind: "template".into(),
        generator: format!("{RNG_NAME} seed={} n={n}", config.seed),
        anchor: Anchor::default(),
        segments,
        truth: Some(GroundTruth {
            h: h.map(|v| v.to_string()),
            segments: truth.iter().map(|(x, y)| (s3(x), s3(y))).collect(),
        }),
    })
}

/// Integer instance for building a solver: Pythagorean segment lengths,
/// the frame pattern on the first two segments, an integer homography, and
/// the distorted points with denominators cleared.
pub fn gen_template_instance(config: &GenerationConfig) -> Result<SegmentInstance, DatagenError> {
    config.validate()?;
    let quads = enumerate_quadruples(config.quadruple_bound);
    if quads.len() < config.n - 1 {
        return Err(DatagenError::InvalidConfig(format!(
            "only {} quadruples below {} for {} segments",
            quads.len(),
            config.quadruple_bound,
            config.n
        )));
    }
    let mut rng = config.rng(1);
    for _ in 0..config.max_resamples {
        if let Some(inst) = attempt(config, &mut rng, &quads) {
            inst.validate()?;
            return Ok(inst);
        }
    }
    Err(DatagenError::GenerationExhausted(config.max_resamples))
}
