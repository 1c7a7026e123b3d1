use super::extract::{extract_solutions, UpgradeSolution};
use super::replay::replay;
use super::template::SolverTemplate;
use super::SolverError;
use crate::algebra::{BigFloat, FloatField, PolyRing};
use crate::upgrade::{apply_homography, build_system, length_error, upgraded_lengths, SegmentInstance};

/// Largest `|d_i - d'_i|` that still counts as reproducing the lengths.
pub const LENGTH_TOLERANCE: f64 = 1e-9;

/// Precision that suffices for exact data with `n` segments.
pub fn default_precision(n: usize) -> u32 {
    match n {
        0..=9 => 1088,
        10..=11 => 512,
        12..=14 => 448,
        15..=19 => 384,
        20..=24 => 192,
        _ => 256,
    }
}

/// How a solve ended, for success-rate statistics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Success,
    /// Four real solutions, but some length misses [`LENGTH_TOLERANCE`].
    Inaccurate,
    NoRealSolution,
    /// A float coefficient the template needed was exactly zero.
    ZeroDivision,
    ShapeMismatch,
    Other,
}

impl Outcome {
    pub const ALL: [Outcome; 6] = [
        Outcome::Success,
        Outcome::Inaccurate,
        Outcome::NoRealSolution,
        Outcome::ZeroDivision,
        Outcome::ShapeMismatch,
        Outcome::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Success => "success",
            Outcome::Inaccurate => "inaccurate",
            Outcome::NoRealSolution => "no-real-solution",
            Outcome::ZeroDivision => "zero-division",
            Outcome::ShapeMismatch => "shape-mismatch",
            Outcome::Other => "other",
        }
    }

    /// With `require_lengths` a solve only succeeds if every solution
    /// reproduces every length; otherwise four real solutions suffice,
    /// which is the only sensible test on noisy data.
    pub fn classify(result: &Result<UpgradeSolution, SolverError>, require_lengths: bool) -> Outcome {
        match result {
            Ok(s) if !require_lengths || s.max_length_residual().is_some_and(|r| r < LENGTH_TOLERANCE) => {
                Outcome::Success
            }
            Ok(_) => Outcome::Inaccurate,
            Err(SolverError::NoRealSolution(_)) => Outcome::NoRealSolution,
            Err(SolverError::ZeroDivision | SolverError::SupportMismatch(_)) => Outcome::ZeroDivision,
            Err(SolverError::ShapeMismatch(_)) => Outcome::ShapeMismatch,
            Err(_) => Outcome::Other,
        }
    }
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The sign pattern `(X1, s2 X2, s3 X3)` closest to a solution's upgraded
/// points, and how far off they are.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PatternMatch {
    pub signs: [i8; 2],
    pub deviation: f64,
}

impl UpgradeSolution {
    /// Worst length residual over all four solutions; `None` if any
    /// solution sent a point to infinity.
    pub fn max_length_residual(&self) -> Option<f64> {
        self.solutions
            .iter()
            .map(|s| s.max_length_residual)
            .try_fold(0.0f64, |acc, r| r.map(|r| acc.max(r)))
    }

    /// Worst relative length error over all four solutions.
    pub fn length_error(&self) -> Option<f64> {
        self.solutions
            .iter()
            .map(|s| s.length_error)
            .try_fold(0.0f64, |acc, r| r.map(|r| acc.max(r)))
    }

    /// The patterns of the four solutions, if ground truth was available.
    pub fn patterns(&self) -> Option<Vec<PatternMatch>> {
        self.solutions.iter().map(|s| s.pattern).collect()
    }
}

/// Builds the float system of `instance`, replays `template` on it, reads
/// off the four solutions and measures them against the known lengths and,
/// if present, the ground-truth points.
pub fn solve(
    template: &SolverTemplate,
    instance: &SegmentInstance,
    precision_bits: u32,
) -> Result<UpgradeSolution, SolverError> {
    instance.validate()?;
    if instance.n() != template.n {
        return Err(SolverError::Usage(format!(
            "instance has {} segments, template was built for {}",
            instance.n(),
            template.n
        )));
    }
    if instance.anchor != template.anchor {
        return Err(SolverError::Usage(format!(
            "instance anchor `{}` differs from template anchor `{}`",
            instance.anchor, template.anchor
        )));
    }
    let field = FloatField::new(precision_bits);
    let ring = PolyRing::new(field, template.order);
    let segments = instance.segments_in(&field)?;
    let system = build_system(&ring, &segments, instance.anchor)?;
    let reduced = replay(template, &system, precision_bits)?;
    let mut solution = extract_solutions(&reduced)?;

    let truth_d: Vec<BigFloat> = segments.iter().map(|s| s.d.clone()).collect();
    let truth_points = match &instance.truth {
        Some(t) => {
            let mut pts = Vec::with_capacity(2 * t.segments.len());
            for (x, y) in &t.segments {
                for p in [x, y] {
                    let mut q = Vec::with_capacity(3);
                    for c in p {
                        q.push(field.parse_decimal(c)?);
                    }
                    pts.push(q);
                }
            }
            Some(pts)
        }
        None => None,
    };
    for s in &mut solution.solutions {
        let lengths = upgraded_lengths(&field, &s.params, &segments)?;
        if let Some(lengths) = lengths.into_iter().collect::<Option<Vec<_>>>() {
            let worst = truth_d
                .iter()
                .zip(&lengths)
                .map(|(d, l)| d.sub(l).abs().to_f64())
                .fold(0.0, f64::max);
            s.max_length_residual = Some(worst);
            s.length_error = Some(length_error(&truth_d, &lengths).to_f64());
        }
        if let Some(truth) = &truth_points {
            let mut images = Vec::with_capacity(truth.len());
            for seg in &segments {
                for p in [&seg.x, &seg.y] {
                    images.push(apply_homography(&field, &s.params, p)?);
                }
            }
            if images.iter().all(|m| !m.at_infinity) {
                s.pattern = Some(closest_pattern(
                    truth,
                    images.iter().map(|m| &m.point[..3]),
                ));
            }
        }
    }
    Ok(solution)
}

fn closest_pattern<'a>(truth: &[Vec<BigFloat>], images: impl Iterator<Item = &'a [BigFloat]> + Clone) -> PatternMatch {
    let deviation = |signs: [i8; 2]| {
        truth
            .iter()
            .zip(images.clone())
            .flat_map(|(t, p)| {
                (0..3).map(move |k| {
                    let want = if k > 0 && signs[k - 1] < 0 { t[k].neg() } else { t[k].clone() };
                    p[k].sub(&want).abs().to_f64()
                })
            })
            .fold(0.0, f64::max)
    };
    [[1i8, 1], [-1, 1], [1, -1], [-1, -1]]
        .into_iter()
        .map(|signs| PatternMatch {
            signs,
            deviation: deviation(signs),
        })
        .min_by(|a, b| a.deviation.total_cmp(&b.deviation))
        .expect("four candidates")
}
