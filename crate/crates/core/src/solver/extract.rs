use super::shape::{basis_shape, match_shape};
use super::solve::PatternMatch;
use super::SolverError;
use crate::algebra::{BigFloat, Monomial, Polynomial, NVARS};
use crate::upgrade::HomographyParams;

/// One of the four sign variants.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedSolution {
    /// Signs taken for the square roots of `h5` and `h6`.
    pub signs: [i8; 2],
    pub params: HomographyParams<BigFloat>,
    /// `h1 h4 h6 h9`.
    pub det: BigFloat,
    /// Largest `|g(h)| / |c1|` over `g10`, `g12`, `g13`, which are not
    /// used to compute `h`.
    pub consistency: f64,
    /// `max_i |d_i - d'_i|`; filled in by [`super::solve`].
    pub max_length_residual: Option<f64>,
    pub length_error: Option<f64>,
    /// Which of the patterns `(X1, ±X2, ±X3)` this solution produces
    /// against ground truth.
    pub pattern: Option<PatternMatch>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UpgradeSolution {
    /// In the order `(+,+)`, `(-,+)`, `(+,-)`, `(-,-)`.
    pub solutions: Vec<SignedSolution>,
    pub precision_bits: u32,
}

fn eval_mono(m: &Monomial, point: &[BigFloat; NVARS]) -> BigFloat {
    let prec = point[0].precision();
    let mut acc = BigFloat::one(prec);
    for (k, &e) in m.exponents().iter().enumerate() {
        for _ in 0..e {
            acc = acc.mul(&point[k]);
        }
    }
    acc
}

/// `(c1, c2)` of `c1 head + c2 tail`.
fn coeffs<'a>(p: &'a Polynomial<BigFloat>, shape: &(Monomial, Monomial)) -> (&'a BigFloat, &'a BigFloat) {
    let get = |m| p.coeff_of(m).expect("support was matched");
    (get(&shape.0), get(&shape.1))
}

/// `-c2 / c1`.
fn ratio(c: (&BigFloat, &BigFloat)) -> Result<BigFloat, SolverError> {
    Ok(c.1.div(c.0)?.neg())
}

fn root(c: (&BigFloat, &BigFloat), name: &str) -> Result<BigFloat, SolverError> {
    let r = ratio(c)?;
    if !r.is_positive() {
        return Err(SolverError::NoRealSolution(format!("{name}^2 = {:e}", r.to_f64())));
    }
    Ok(r.sqrt().expect("positive"))
}

/// Reads the four solutions off a reduced basis of the thirteen-polynomial
/// shape. `h5` and `h6` come from square roots; everything else from
/// linear and bilinear elements.
pub fn extract_solutions(reduced: &[Polynomial<BigFloat>]) -> Result<UpgradeSolution, SolverError> {
    let idx = match_shape(reduced).map_err(SolverError::ShapeMismatch)?;
    let shape = basis_shape();
    let g = |k: usize| coeffs(&reduced[idx[k - 1]], &shape[k - 1]);
    let prec = reduced[0].terms()[0].coeff.precision();

    // g1..g6 give h1, h2, h3, h7, h8, h9.
    let mut shared = Vec::with_capacity(6);
    for k in 1..=6 {
        shared.push(ratio(g(k))?);
    }
    let h5 = root(g(8), "h5")?;
    let h6 = root(g(9), "h6")?;
    let g7 = g(7);
    let g11 = g(11);

    let mut solutions = Vec::with_capacity(4);
    for signs in [[1i8, 1], [-1, 1], [1, -1], [-1, -1]] {
        let h5 = if signs[0] < 0 { h5.neg() } else { h5.clone() };
        let h6 = if signs[1] < 0 { h6.neg() } else { h6.clone() };
        let h4 = g7.1.mul(&h5).div(g7.0)?.neg();
        let h10 = g11.0.mul(&h5).mul(&h6).div(g11.1)?.neg();
        let h = [
            shared[0].clone(),
            shared[1].clone(),
            shared[2].clone(),
            h4,
            h5,
            h6,
            shared[3].clone(),
            shared[4].clone(),
            shared[5].clone(),
        ];
        let det = h[0].mul(&h[3]).mul(&h[5]).mul(&h[8]);
        let params = HomographyParams {
            h,
            h10: Some(h10),
        };
        let point: [BigFloat; NVARS] = std::array::from_fn(|k| match k {
            9 => params.h10.clone().unwrap(),
            _ => params.h[k].clone(),
        });
        let consistency = [10, 12, 13]
            .iter()
            .map(|&k| {
                let (c1, c2) = g(k);
                let (head, tail) = &shape[k - 1];
                let v = c1.mul(&eval_mono(head, &point)).add(&c2.mul(&eval_mono(tail, &point)));
                v.div(c1).map(|r| r.abs().to_f64()).unwrap_or(f64::INFINITY)
            })
            .fold(0.0, f64::max);
        solutions.push(SignedSolution {
            signs,
            params,
            det,
            consistency,
            max_length_residual: None,
            length_error: None,
            pattern: None,
        });
    }
    Ok(UpgradeSolution {
        solutions,
        precision_bits: prec,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FloatField, MonomialOrder, PolyRing, Term};

    const P: u32 = 128;

    /// The reduced basis whose real solutions are `h` up to the signs of
    /// `(h4, h5)` and `h6`, with `h10 = 1 / (h1 h4 h6 h9)`.
    fn basis_for(h: [f64; 9]) -> Vec<Polynomial<BigFloat>> {
        let ring = PolyRing::new(FloatField::new(P), MonomialOrder::grevlex());
        let f = |x: f64| BigFloat::from_f64(x, P);
        let h10 = 1.0 / (h[0] * h[3] * h[5] * h[8]);
        let tails = [
            -h[0],
            -h[1],
            -h[2],
            -h[6],
            -h[7],
            -h[8],
            -h[3] / h[4],
            -h[4] * h[4],
            -h[5] * h[5],
            -h10 * h10,
            -h[4] * h[5] / h10,
            -h[4] * h10 / h[5],
            -h[5] * h10 / h[4],
        ];
        basis_shape()
            .iter()
            .zip(tails)
            .map(|((a, b), c)| {
                ring.from_terms([
                    Term { coeff: f(1.0), mono: *a },
                    Term { coeff: f(c), mono: *b },
                ])
            })
            .collect()
    }

    #[test]
    fn recovers_the_four_sign_variants() {
        let h = [1.5, 0.25, -0.5, 2.0, 0.75, 1.25, 0.125, -0.375, 1.0];
        let sol = extract_solutions(&basis_for(h)).unwrap();
        assert_eq!(sol.solutions.len(), 4);
        let signs: Vec<[i8; 2]> = sol.solutions.iter().map(|s| s.signs).collect();
        assert_eq!(signs, [[1, 1], [-1, 1], [1, -1], [-1, -1]]);
        for s in &sol.solutions {
            let v: Vec<f64> = s.params.h.iter().map(BigFloat::to_f64).collect();
            for k in [0, 1, 2, 6, 7, 8] {
                assert!((v[k] - h[k]).abs() < 1e-15);
            }
            let (s5, s6) = (s.signs[0] as f64, s.signs[1] as f64);
            assert!((v[3] - s5 * h[3]).abs() < 1e-15);
            assert!((v[4] - s5 * h[4]).abs() < 1e-15);
            assert!((v[5] - s6 * h[5]).abs() < 1e-15);
            let prod = s.det.mul(s.params.h10.as_ref().unwrap()).to_f64();
            assert!((prod - 1.0).abs() < 1e-12, "{prod}");
            assert!(s.consistency < 1e-12);
        }
    }

    #[test]
    fn negative_radicand_has_no_real_solution() {
        let mut g = basis_for([1.0, 0.5, 0.5, 1.0, 0.5, 1.0, 0.5, 0.5, 1.0]);
        let idx = match_shape(&g).unwrap();
        // h5^2 + 0.25 = 0
        let ring = PolyRing::new(FloatField::new(P), MonomialOrder::grevlex());
        let (a, b) = basis_shape()[7];
        g[idx[7]] = ring.from_terms([
            Term { coeff: BigFloat::one(P), mono: a },
            Term { coeff: BigFloat::from_f64(0.25, P), mono: b },
        ]);
        assert!(matches!(extract_solutions(&g), Err(SolverError::NoRealSolution(_))));
    }

    #[test]
    fn wrong_shape_is_reported() {
        let g = basis_for([1.0; 9]);
        assert!(matches!(extract_solutions(&g[1..]), Err(SolverError::ShapeMismatch(_))));
    }
}
