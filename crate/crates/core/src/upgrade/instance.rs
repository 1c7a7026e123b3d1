//! Segment instances and their text format.
//!
//! ```text
//! segment-instance v1
//! kind template
//! generator chacha8 seed=7 n=9
//! n 9
//! anchor 0 y
//! seg <x1> <x2> <x3> <x4> <y1> <y2> <y3> <y4> <d>
//! ...
//! truth-h <h1> ... <h9>
//! truth-seg <X1> <X2> <X3> <Y1> <Y2> <Y3>
//! ...
//! end
//! ```
//!
//! All numbers are decimal literals kept verbatim, so a file round-trips
//! exactly and can be read into any coefficient field. The `truth-*` lines
//! are optional as a block.

use std::fmt::Write as _;

use super::{HomographyParams, UpgradeError, MIN_SEGMENTS};
use crate::algebra::Field;
use crate::text::{FormatError, Lines};

pub const INSTANCE_HEADER: &str = "segment-instance v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Endpoint {
    #[default]
    X,
    Y,
}

impl std::fmt::Display for Anchor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let end = match self.end {
            Endpoint::X => "x",
            Endpoint::Y => "y",
        };
        write!(f, "{} {end}", self.segment)
    }
}

impl Anchor {
    /// Parses the fields after an `anchor` keyword: an index and `x`/`y`.
    pub(crate) fn from_fields(lines: &Lines<'_>, f: &[&str]) -> Result<Anchor, FormatError> {
        match f {
            [i, e] => Ok(Anchor {
                segment: lines.parse(i)?,
                end: match *e {
                    "x" => Endpoint::X,
                    "y" => Endpoint::Y,
                    _ => return Err(lines.error("anchor end must be `x` or `y`")),
                },
            }),
            _ => Err(lines.error("`anchor` takes a segment index and an end")),
        }
    }
}

/// The point whose image is pinned to fourth coordinate 1. Defaults to the
/// first segment's `X`, the frame origin, which makes the constraint
/// `1 - h9`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Anchor {
    pub segment: usize,
    pub end: Endpoint,
}

/// One distorted segment in some field.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment<E> {
    pub x: [E; 4],
    pub y: [E; 4],
    pub d: E,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentRecord {
    pub x: [String; 4],
    pub y: [String; 4],
    pub d: String,
}

/// The generating homography and the undistorted affine endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundTruth {
    pub h: [String; 9],
    pub segments: Vec<([String; 3], [String; 3])>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentInstance {
    /// Free-form label such as `template`, `exact` or `noisy`.
    pub kind: String,
    /// How the instance was produced (RNG algorithm, seed, parameters).
    pub generator: String,
    pub anchor: Anchor,
    pub segments: Vec<SegmentRecord>,
    pub truth: Option<GroundTruth>,
}

fn is_decimal(s: &str) -> bool {
    let s = s.strip_prefix(['-', '+']).unwrap_or(s);
    let (mant, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, Some(e)),
        None => (s, None),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    let digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
    let exp_ok = exp.is_none_or(|e| {
        let e = e.strip_prefix(['-', '+']).unwrap_or(e);
        !e.is_empty() && digits(e)
    });
    !(int.is_empty() && frac.is_empty()) && digits(int) && digits(frac) && exp_ok
}

fn single_line(s: &str) -> bool {
    !s.contains(['\n', '\r'])
}

impl SegmentInstance {
    pub fn n(&self) -> usize {
        self.segments.len()
    }

    /// Checks the segment count, the anchor and that every number is a
    /// decimal literal.
    pub fn validate(&self) -> Result<(), UpgradeError> {
        let bad = |m: String| Err(UpgradeError::InvalidInstance(m));
        if self.n() < MIN_SEGMENTS {
            return bad(format!("{} segments, at least {MIN_SEGMENTS} needed", self.n()));
        }
        if self.anchor.segment >= self.n() {
            return bad(format!("anchor segment {} out of range", self.anchor.segment));
        }
        if !single_line(&self.kind) || !single_line(&self.generator) || self.kind.split_whitespace().count() != 1 {
            return bad("kind must be one word and generator one line".into());
        }
        let mut numbers: Vec<&String> = self
            .segments
            .iter()
            .flat_map(|s| s.x.iter().chain(&s.y).chain(std::iter::once(&s.d)))
            .collect();
        if let Some(t) = &self.truth {
            if t.segments.len() != self.n() {
                return bad(format!("{} truth segments for {} segments", t.segments.len(), self.n()));
            }
            numbers.extend(t.h.iter());
            numbers.extend(t.segments.iter().flat_map(|(x, y)| x.iter().chain(y)));
        }
        match numbers.into_iter().find(|s| !is_decimal(s)) {
            Some(s) => bad(format!("{s:?} is not a decimal number")),
            None => Ok(()),
        }
    }

    /// The distorted segments converted into `field`.
    pub fn segments_in<F: Field>(&self, field: &F) -> Result<Vec<Segment<F::Elem>>, UpgradeError> {
        let conv = |s: &String| field.from_decimal(s);
        self.segments
            .iter()
            .map(|s| {
                Ok(Segment {
                    x: try_map4(&s.x, conv)?,
                    y: try_map4(&s.y, conv)?,
                    d: conv(&s.d)?,
                })
            })
            .collect()
    }

    /// Ground-truth parameters scaled to satisfy the scale constraint at
    /// the anchor, with `h10` filled in; `None` without ground truth.
    pub fn truth_params_in<F: Field>(
        &self,
        field: &F,
    ) -> Result<Option<HomographyParams<F::Elem>>, UpgradeError> {
        let Some(t) = &self.truth else {
            return Ok(None);
        };
        let mut h = Vec::with_capacity(9);
        for s in &t.h {
            h.push(field.from_decimal(s)?);
        }
        let raw = HomographyParams::new(h.try_into().expect("nine entries"));
        let seg = &self.segments[self.anchor.segment];
        let p = try_map4(
            match self.anchor.end {
                Endpoint::X => &seg.x,
                Endpoint::Y => &seg.y,
            },
            |s| field.from_decimal(s),
        )?;
        let m = super::homography_matrix(field, &raw)?;
        let w = (0..4).fold(field.zero(), |acc, c| field.add(&acc, &field.mul(&m[3][c], &p[c])));
        if field.is_zero(&w) {
            return Err(UpgradeError::InvalidInstance("anchor maps to infinity".into()));
        }
        Ok(Some(raw.scaled(field, &field.inv(&w)?)?.with_h10(field)?))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{INSTANCE_HEADER}\nkind {}\ngenerator {}\nn {}\n", self.kind, self.generator, self.n());
        let _ = writeln!(out, "anchor {}", self.anchor);
        for s in &self.segments {
            let _ = writeln!(out, "seg {} {} {}", s.x.join(" "), s.y.join(" "), s.d);
        }
        if let Some(t) = &self.truth {
            let _ = writeln!(out, "truth-h {}", t.h.join(" "));
            for (x, y) in &t.segments {
                let _ = writeln!(out, "truth-seg {} {}", x.join(" "), y.join(" "));
            }
        }
        out.push_str("end\n");
        out
    }

    pub fn from_text(text: &str) -> Result<SegmentInstance, UpgradeError> {
        let mut lines = Lines::new(text);
        let head = lines.next_fields()?;
        if head.join(" ") != INSTANCE_HEADER {
            return Err(lines.error(format!("expected `{INSTANCE_HEADER}`")).into());
        }
        let kind = match lines.expect("kind")?.as_slice() {
            [k] => k.to_string(),
            _ => return Err(lines.error("`kind` takes one word").into()),
        };
        let generator = lines.expect("generator")?.join(" ");
        let n = lines.expect_count("n")?;
        let f = lines.expect("anchor")?;
        let anchor = Anchor::from_fields(&lines, &f)?;
        let owned = |f: &[&str]| -> Vec<String> { f.iter().map(|s| s.to_string()).collect() };
        let mut segments = Vec::with_capacity(n);
        for _ in 0..n {
            let f = lines.expect("seg")?;
            if f.len() != 9 {
                return Err(lines.error("`seg` takes 9 numbers").into());
            }
            let v = owned(&f);
            segments.push(SegmentRecord {
                x: v[0..4].to_vec().try_into().unwrap(),
                y: v[4..8].to_vec().try_into().unwrap(),
                d: v[8].clone(),
            });
        }
        let f = lines.next_fields()?;
        let truth = match f.as_slice() {
            ["end"] => None,
            ["truth-h", h @ ..] if h.len() == 9 => {
                let h = owned(h).try_into().unwrap();
                let mut segs = Vec::with_capacity(n);
                for _ in 0..n {
                    let f = lines.expect("truth-seg")?;
                    if f.len() != 6 {
                        return Err(lines.error("`truth-seg` takes 6 numbers").into());
                    }
                    let v = owned(&f);
                    segs.push((v[0..3].to_vec().try_into().unwrap(), v[3..6].to_vec().try_into().unwrap()));
                }
                if lines.next_fields()? != ["end"] {
                    return Err(lines.error("expected `end`").into());
                }
                Some(GroundTruth { h, segments: segs })
            }
            _ => return Err(lines.error("expected `truth-h` with 9 numbers or `end`").into()),
        };
        lines.finish()?;
        let inst = SegmentInstance {
            kind,
            generator,
            anchor,
            segments,
            truth,
        };
        inst.validate()?;
        Ok(inst)
    }
}

fn try_map4<T, E>(a: &[String; 4], f: impl Fn(&String) -> Result<T, E>) -> Result<[T; 4], E> {
    let [a0, a1, a2, a3] = a;
    Ok([f(a0)?, f(a1)?, f(a2)?, f(a3)?])
}
