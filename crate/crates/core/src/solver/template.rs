//! The solver: the template system over `Z_p` and its recorded trace.
//!
//! ```text
//! solver-template v1
//! field zp 332251314113
//! order grevlex:h2,h3,h8,h9,h7,h1,h4,h5,h6,h10
//! n 9
//! anchor 0 x
//! source chacha8 seed=1 n=9
//! stats basis 337 steps 19 pairs 326 zero 1840 reduced 13
//! system 11
//! poly 97
//! ...
//! input 18 fingerprint 9f1c03a2b4d5e6f7
//! red <target> <reductor>...
//! steps 19
//! step 3 fingerprint 0123456789abcdef
//! pair <i> <j> <reductor>...
//! end
//! ```

use std::fmt::Write as _;

use super::shape::match_shape;
use super::SolverError;
use crate::algebra::text::{read_field_tag, read_order, read_poly, write_field_and_order, write_poly};
use crate::algebra::{Field, Fp, MonomialOrder, PolyRing, Polynomial, PrimeField};
use crate::groebner::{buchberger, reduce_basis, replay_trace, BuchbergerConfig, GroebnerError, Trace, TracePair, TraceReduction, TraceStep};
use crate::text::{FormatError, Lines};
use crate::upgrade::{build_system, Anchor, SegmentInstance, MIN_SEGMENTS};

pub const TEMPLATE_HEADER: &str = "solver-template v1";

/// A template whose basis grows past this many polynomials is treated as
/// degenerate. Generic instances stay far below it for every `N >= 9`.
const MAX_TEMPLATE_BASIS: usize = 5000;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TemplateStats {
    /// Polynomials in the final, non-reduced basis.
    pub basis_len: usize,
    pub multi_reductions: usize,
    pub pairs_reduced: usize,
    pub zero_reductions: usize,
    pub reduced_len: usize,
}

/// Immutable once built; many solves may share one.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverTemplate {
    pub n: usize,
    pub order: MonomialOrder,
    pub anchor: Anchor,
    /// Generator line of the template instance.
    pub source: String,
    pub system: Vec<Polynomial<Fp>>,
    pub trace: Trace,
    pub stats: TemplateStats,
}

fn is_integer(s: &str) -> bool {
    let d = s.strip_prefix('-').unwrap_or(s);
    !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit())
}

/// Computes the Groebner basis of an integer instance over `Z_p`, records
/// the trace and checks that the reduced basis has the thirteen-polynomial
/// shape.
pub fn build_template(instance: &SegmentInstance, order: MonomialOrder) -> Result<SolverTemplate, SolverError> {
    instance.validate()?;
    if instance.n() < MIN_SEGMENTS {
        return Err(SolverError::Usage(format!("N = {} is below {MIN_SEGMENTS}", instance.n())));
    }
    let all_integer = instance
        .segments
        .iter()
        .all(|s| s.x.iter().chain(&s.y).chain([&s.d]).all(|v| is_integer(v)));
    if !all_integer {
        return Err(SolverError::Usage("template instances need integer coordinates and lengths".into()));
    }
    let ring = PolyRing::new(PrimeField::new(), order);
    let segments = instance.segments_in(&ring.field)?;
    let system = build_system(&ring, &segments, instance.anchor)?;

    let config = BuchbergerConfig {
        max_basis_len: MAX_TEMPLATE_BASIS,
        ..BuchbergerConfig::default()
    };
    let mut trace = Trace::default();
    let state = match buchberger(&ring, system.clone(), &config, Some(&mut trace)) {
        Ok(s) => s,
        Err(GroebnerError::ResourceLimit(m)) => return Err(SolverError::DegenerateTemplate(m)),
        Err(e) => return Err(e.into()),
    };
    let basis: Vec<Polynomial<Fp>> = state.polynomials().cloned().collect();
    let reduced = reduce_basis(&ring, &basis)?;
    match_shape(&reduced).map_err(SolverError::DegenerateTemplate)?;
    Ok(SolverTemplate {
        n: instance.n(),
        order,
        anchor: instance.anchor,
        source: instance.generator.clone(),
        system,
        stats: TemplateStats {
            basis_len: state.len(),
            multi_reductions: state.stats.multi_reductions,
            pairs_reduced: state.stats.pairs_reduced,
            zero_reductions: state.stats.zero_reductions,
            reduced_len: reduced.len(),
        },
        trace,
    })
}

fn hex(f: Option<u64>) -> String {
    f.map_or_else(|| "-".into(), |v| format!("{v:016x}"))
}

fn join(ids: &[u32]) -> String {
    ids.iter().map(|i| format!(" {i}")).collect()
}

impl SolverTemplate {
    pub fn ring(&self) -> PolyRing<PrimeField> {
        PolyRing::new(PrimeField::new(), self.order)
    }

    /// Replays the trace on the template system itself and returns the
    /// reduced basis.
    pub fn reduced_basis(&self) -> Result<Vec<Polynomial<Fp>>, SolverError> {
        let ring = self.ring();
        let state = replay_trace(&ring, self.system.clone(), &self.trace)?;
        let basis: Vec<Polynomial<Fp>> = state.polynomials().cloned().collect();
        Ok(reduce_basis(&ring, &basis)?)
    }

    pub fn to_text(&self) -> String {
        let ring = self.ring();
        let mut out = format!("{TEMPLATE_HEADER}\n");
        write_field_and_order(&ring, &mut out);
        let s = &self.stats;
        let _ = writeln!(out, "n {}\nanchor {}\nsource {}", self.n, self.anchor, self.source);
        let _ = writeln!(
            out,
            "stats basis {} steps {} pairs {} zero {} reduced {}",
            s.basis_len, s.multi_reductions, s.pairs_reduced, s.zero_reductions, s.reduced_len
        );
        let _ = writeln!(out, "system {}", self.system.len());
        for p in &self.system {
            write_poly(&ring, p, &mut out);
        }
        let t = &self.trace;
        let _ = writeln!(out, "input {} fingerprint {}", t.input.len(), hex(t.input_fingerprint));
        for r in &t.input {
            let _ = writeln!(out, "red {}{}", r.target, join(&r.reductors));
        }
        let _ = writeln!(out, "steps {}", t.steps.len());
        for step in &t.steps {
            let _ = writeln!(out, "step {} fingerprint {}", step.pairs.len(), hex(step.fingerprint));
            for p in &step.pairs {
                let _ = writeln!(out, "pair {} {}{}", p.i, p.j, join(&p.reductors));
            }
        }
        out.push_str("end\n");
        out
    }

    pub fn from_text(text: &str) -> Result<SolverTemplate, SolverError> {
        let mut lines = Lines::new(text);
        let header = lines.next_fields()?;
        if header.join(" ") != TEMPLATE_HEADER {
            return Err(lines.error(format!("expected `{TEMPLATE_HEADER}`")).into());
        }
        let field = PrimeField::new();
        let tag = read_field_tag(&mut lines)?;
        if tag != field.tag() {
            return Err(lines.error(format!("template field must be `{}`, found `{tag}`", field.tag())).into());
        }
        let order = read_order(&mut lines)?;
        let ring = PolyRing::new(field, order);
        let n = lines.expect_count("n")?;
        let f = lines.expect("anchor")?;
        let anchor = Anchor::from_fields(&lines, &f)?;
        let source = lines.expect("source")?.join(" ");

        let f = lines.expect("stats")?;
        let stats = match f.as_slice() {
            ["basis", b, "steps", m, "pairs", p, "zero", z, "reduced", r] => TemplateStats {
                basis_len: lines.parse(b)?,
                multi_reductions: lines.parse(m)?,
                pairs_reduced: lines.parse(p)?,
                zero_reductions: lines.parse(z)?,
                reduced_len: lines.parse(r)?,
            },
            _ => return Err(lines.error("malformed `stats` line").into()),
        };

        let count = lines.expect_count("system")?;
        if count != n + 2 {
            return Err(lines.error(format!("{count} polynomials for N = {n}, expected {}", n + 2)).into());
        }
        let system = (0..count)
            .map(|_| read_poly(&ring, &mut lines))
            .collect::<Result<Vec<_>, _>>()?;

        let f = lines.expect("input")?;
        let (count, input_fingerprint) = counted_with_fingerprint(&lines, &f)?;
        let mut input = Vec::with_capacity(count);
        for _ in 0..count {
            let f = lines.expect("red")?;
            let ids = indices(&lines, &f)?;
            let (&target, reductors) = ids.split_first().ok_or_else(|| lines.error("`red` needs a target"))?;
            input.push(TraceReduction {
                target,
                reductors: reductors.to_vec(),
            });
        }
        let count = lines.expect_count("steps")?;
        let mut steps = Vec::with_capacity(count);
        for _ in 0..count {
            let f = lines.expect("step")?;
            let (pairs, fingerprint) = counted_with_fingerprint(&lines, &f)?;
            let mut step = TraceStep {
                pairs: Vec::with_capacity(pairs),
                fingerprint,
            };
            for _ in 0..pairs {
                let f = lines.expect("pair")?;
                let ids = indices(&lines, &f)?;
                let [i, j, reductors @ ..] = ids.as_slice() else {
                    return Err(lines.error("`pair` needs two indices").into());
                };
                step.pairs.push(TracePair {
                    i: *i,
                    j: *j,
                    reductors: reductors.to_vec(),
                });
            }
            steps.push(step);
        }
        lines.expect("end")?;
        lines.finish()?;
        Ok(SolverTemplate {
            n,
            order,
            anchor,
            source,
            system,
            trace: Trace {
                input,
                input_fingerprint,
                steps,
            },
            stats,
        })
    }
}

fn counted_with_fingerprint(lines: &Lines<'_>, f: &[&str]) -> Result<(usize, Option<u64>), FormatError> {
    match f {
        [count, "fingerprint", "-"] => Ok((lines.parse(count)?, None)),
        [count, "fingerprint", h] => {
            let h = u64::from_str_radix(h, 16).map_err(|_| lines.error(format!("bad fingerprint {h:?}")))?;
            Ok((lines.parse(count)?, Some(h)))
        }
        _ => Err(lines.error("expected `<count> fingerprint <hex>`")),
    }
}

fn indices(lines: &Lines<'_>, f: &[&str]) -> Result<Vec<u32>, FormatError> {
    f.iter().map(|s| lines.parse(s)).collect()
}
