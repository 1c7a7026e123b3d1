use nalgebra::SMatrix;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::{DatagenError, GenerationConfig, RNG_NAME};
use crate::algebra::{BigFloat, FloatField};
use crate::upgrade::{canonical_frame, Anchor, GroundTruth, SegmentInstance, SegmentRecord};

/// Working precision for generated float data.
pub const GEN_PRECISION: u32 = 2304;
/// Significant digits written for computed (non-grid) values.
pub const STORED_DIGITS: usize = 640;

fn grid_value(k: i64, denom: u32) -> BigFloat {
    BigFloat::from_i64(k, GEN_PRECISION)
        .div(&BigFloat::from_i64(denom as i64, GEN_PRECISION))
        .unwrap()
}

fn grid_string(k: i64, denom: u32) -> String {
    // Exact: a power-of-ten denominator keeps the literal finite.
    if denom.is_power_of_ten() {
        let digits = denom.ilog10() as usize;
        let sign = if k < 0 { "-" } else { "" };
        let m = k.unsigned_abs();
        let p = 10u64.pow(digits as u32);
        if digits == 0 {
            format!("{sign}{m}")
        } else {
            format!("{sign}{}.{:0digits$}", m / p, m % p)
        }
    } else {
        grid_value(k, denom).to_decimal(STORED_DIGITS)
    }
}

trait PowerOfTen {
    fn is_power_of_ten(self) -> bool;
}

impl PowerOfTen for u32 {
    fn is_power_of_ten(self) -> bool {
        let mut v = self;
        while v.is_multiple_of(10) && v > 1 {
            v /= 10;
        }
        v == 1
    }
}

/// `H^{-1} p` at generation precision, affinely normalized.
fn distort_float(h: &[BigFloat; 9], p: &[BigFloat; 4]) -> Option<[BigFloat; 4]> {
    let [h1, h2, h3, h4, h5, h6, h7, h8, h9] = h;
    let [x1, x2, x3, x4] = p;
    let t = x2.mul(h6).sub(&h5.mul(x3));
    let a = x1.mul(h4).mul(h6).sub(&h2.mul(&t)).sub(&h3.mul(h4).mul(x3));
    let b = h1.mul(&t);
    let c = x3.mul(h1).mul(h4);
    let e = h1
        .mul(h4)
        .mul(h6)
        .mul(x4)
        .sub(&h1.sub(h9).mul(&a))
        .sub(&h7.mul(&b))
        .sub(&h8.mul(&c));
    if e.is_zero() {
        return None;
    }
    let s = h9.div(&e).ok()?;
    Some([a.mul(&s), b.mul(&s), c.mul(&s), BigFloat::one(GEN_PRECISION)])
}

/// Solves for the Eq.-1-form `H` that best maps each `V_l + T_l` to a point
/// proportional to `V_l`, in the least-squares sense, normalized to `h9 = 1`.
fn fit_homography(vertices: &[[f64; 3]; 3], images: &[[f64; 3]; 3]) -> Option<[f64; 9]> {
    let mut a = SMatrix::<f64, 9, 9>::zeros();
    for (l, (v, p)) in vertices.iter().zip(images).enumerate() {
        let w = 1.0 - p[0];
        // row 4 of H p: h1 p1 + h7 p2 + h8 p3 + h9 (1 - p1)
        let row4 = [(0, p[0]), (6, p[1]), (7, p[2]), (8, w)];
        let rows: [&[(usize, f64)]; 3] = [
            &[(0, p[0]), (1, p[1]), (2, p[2])],
            &[(3, p[1]), (4, p[2])],
            &[(5, p[2])],
        ];
        for (k, row) in rows.iter().enumerate() {
            let r = 3 * l + k;
            for &(j, c) in row.iter() {
                a[(r, j)] += c;
            }
            for &(j, c) in &row4 {
                a[(r, j)] -= v[k] * c;
            }
        }
    }
    let svd = a.svd(false, true);
    let v_t = svd.v_t?;
    let (idx, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))?;
    let h: [f64; 9] = std::array::from_fn(|j| v_t[(idx, j)]);
    if h[8].abs() < 1e-9 {
        return None;
    }
    let h = h.map(|x| x / h[8]);
    let det = h[0] * h[3] * h[5];
    (det.is_finite() && det.abs() > 1e-6).then_some(h)
}

/// Exactly consistent float instance: grid points in the cube, a random
/// Eq.-1-form homography close to identity, and the distorted points.
pub fn gen_float_instance(config: &GenerationConfig) -> Result<SegmentInstance, DatagenError> {
    config.validate()?;
    let mut rng = config.rng(2);
    let denom = config.grid_denominator;
    let max_k = (config.cube_side * denom) as i64;
    let side = config.cube_side as f64;
    let vertices = [[side, 0.0, side], [0.0, side, side], [side, side, side]];
    let normal = Normal::new(0.0, 1.0).unwrap();

    for _ in 0..config.max_resamples {
        let images = vertices.map(|v| v.map(|c| c + normal.sample(&mut rng)));
        let Some(h) = fit_homography(&vertices, &images) else {
            continue;
        };
        let h_str = h.map(|v| format!("{v:e}"));
        let hb = h_str
            .clone()
            .map(|s| BigFloat::parse_decimal(&s, GEN_PRECISION).expect("formatted f64"));

        let k = |rng: &mut rand_chacha::ChaCha8Rng| rng.random_range(1..=max_k);
        let mut truth: Vec<([i64; 3], [i64; 3])> = Vec::with_capacity(config.n);
        let y11 = k(&mut rng);
        // See the template generator: (1,0,0) is a fixed point of every H.
        if y11 == denom as i64 {
            continue;
        }
        truth.push(([0, 0, 0], [y11, 0, 0]));
        truth.push(([k(&mut rng), k(&mut rng), 0], [k(&mut rng), k(&mut rng), k(&mut rng)]));
        while truth.len() < config.n {
            let x = [k(&mut rng), k(&mut rng), k(&mut rng)];
            let y = [k(&mut rng), k(&mut rng), k(&mut rng)];
            if x != y {
                truth.push((x, y));
            }
        }

        let lift = |p: &[i64; 3]| {
            let [a, b, c] = p.map(|v| grid_value(v, denom));
            [a, b, c, BigFloat::one(GEN_PRECISION)]
        };
        let mut segments = Vec::with_capacity(config.n);
        let mut ok = true;
        for (x, y) in &truth {
            let (xg, yg) = (lift(x), lift(y));
            let (Some(xh), Some(yh)) = (distort_float(&hb, &xg), distort_float(&hb, &yg)) else {
                ok = false;
                break;
            };
            let d = crate::upgrade::distance(&xg, &yg);
            let s = |p: [BigFloat; 4]| p.map(|v| v.to_decimal(STORED_DIGITS));
            segments.push(SegmentRecord {
                x: s(xh),
                y: s(yh),
                d: d.to_decimal(STORED_DIGITS),
            });
        }
        if !ok {
            continue;
        }
        let s3 = |p: &[i64; 3]| p.map(|v| grid_string(v, denom));
        let inst = SegmentInstance {
            kind: "exact".into(),
            generator: format!("{RNG_NAME} seed={} n={}", config.seed, config.n),
            anchor: Anchor::default(),
            segments,
            truth: Some(GroundTruth {
                h: h_str,
                segments: truth.iter().map(|(x, y)| (s3(x), s3(y))).collect(),
            }),
        };
        inst.validate()?;
        return Ok(inst);
    }
    Err(DatagenError::GenerationExhausted(config.max_resamples))
}

/// Adds independent `N(0, σ²)` noise to all four homogeneous coordinates
/// of every distorted point, then restores the frame pattern with a rigid
/// motion through the first segment and the start of the second. Points
/// are stored affinely normalized again.
pub fn add_noise(instance: &SegmentInstance, sigma: f64, seed: u64) -> Result<SegmentInstance, DatagenError> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(DatagenError::InvalidConfig("sigma must be finite and non-negative".into()));
    }
    if sigma == 0.0 {
        return Ok(instance.clone());
    }
    let field = FloatField::new(GEN_PRECISION);
    let segs = instance.segments_in(&field)?;
    let mut rng = GenerationConfig {
        seed,
        ..GenerationConfig::default()
    }
    .rng(3);
    let normal = Normal::new(0.0, sigma).map_err(|e| DatagenError::InvalidConfig(e.to_string()))?;
    let mut points = Vec::with_capacity(2 * segs.len());
    for s in &segs {
        for p in [&s.x, &s.y] {
            let w = &p[3];
            let mut q = p.clone();
            for v in q.iter_mut() {
                let noise = BigFloat::from_f64(normal.sample(&mut rng), GEN_PRECISION).mul(w);
                *v = v.add(&noise);
            }
            points.push(q);
        }
    }
    let (_, framed) = canonical_frame(&points, [0, 1, 2])?;
    let mut out = instance.clone();
    out.kind = "noisy".into();
    out.generator = format!("{} noise={sigma:e} noise-seed={seed}", instance.generator);
    for (i, rec) in out.segments.iter_mut().enumerate() {
        let s = |p: &[BigFloat; 4]| p.clone().map(|v| v.to_decimal(STORED_DIGITS));
        rec.x = s(&framed[2 * i]);
        rec.y = s(&framed[2 * i + 1]);
    }
    out.validate()?;
    Ok(out)
}
