use super::UpgradeError;
use crate::algebra::BigFloat;

/// `p ↦ R p + t` on affine coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct RigidTransform {
    pub rotation: [[BigFloat; 3]; 3],
    pub translation: [BigFloat; 3],
}

impl RigidTransform {
    pub fn identity(prec: u32) -> RigidTransform {
        RigidTransform {
            rotation: std::array::from_fn(|r| {
                std::array::from_fn(|c| BigFloat::from_i64((r == c) as i64, prec))
            }),
            translation: std::array::from_fn(|_| BigFloat::zero(prec)),
        }
    }

    pub fn is_identity(&self) -> bool {
        let prec = self.translation[0].precision();
        *self == RigidTransform::identity(prec)
    }

    fn rotate(&self, v: &[BigFloat; 3]) -> [BigFloat; 3] {
        std::array::from_fn(|r| dot(&self.rotation[r], v))
    }

    /// Applies the transform to a homogeneous point. Finite points come out
    /// with fourth coordinate 1; points at infinity are only rotated.
    pub fn apply(&self, p: &[BigFloat; 4]) -> [BigFloat; 4] {
        let prec = p[0].precision();
        if p[3].is_zero() {
            let [a, b, c] = self.rotate(&[p[0].clone(), p[1].clone(), p[2].clone()]);
            return [a, b, c, BigFloat::zero(prec)];
        }
        let q = self.rotate(&affine(p));
        let [a, b, c] = std::array::from_fn(|k| q[k].add(&self.translation[k]));
        [a, b, c, BigFloat::one(prec)]
    }
}

fn affine(p: &[BigFloat; 4]) -> [BigFloat; 3] {
    std::array::from_fn(|k| p[k].div(&p[3]).expect("finite point"))
}

fn dot(a: &[BigFloat; 3], b: &[BigFloat; 3]) -> BigFloat {
    a[0].mul(&b[0]).add(&a[1].mul(&b[1])).add(&a[2].mul(&b[2]))
}

fn sub(a: &[BigFloat; 3], b: &[BigFloat; 3]) -> [BigFloat; 3] {
    std::array::from_fn(|k| a[k].sub(&b[k]))
}

fn scale(a: &[BigFloat; 3], s: &BigFloat) -> [BigFloat; 3] {
    std::array::from_fn(|k| a[k].mul(s))
}

fn norm(a: &[BigFloat; 3]) -> BigFloat {
    dot(a, a).sqrt().expect("non-negative")
}

fn cross(a: &[BigFloat; 3], b: &[BigFloat; 3]) -> [BigFloat; 3] {
    [
        a[1].mul(&b[2]).sub(&a[2].mul(&b[1])),
        a[2].mul(&b[0]).sub(&a[0].mul(&b[2])),
        a[0].mul(&b[1]).sub(&a[1].mul(&b[0])),
    ]
}

/// `|small| < 2^(-prec/4) |large|`, or `small` is exactly zero.
fn negligible(small: &BigFloat, large: &BigFloat, prec: u32) -> bool {
    match (small.log2_magnitude(), large.log2_magnitude()) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(s), Some(l)) => s < l - (prec / 4) as i64,
    }
}

/// Moves the designated points `[o, a, b]` to `(0,0,0,1)`, `(x,0,0,1)` and
/// `(x',y',0,1)` by a rotation plus translation, and applies the same motion
/// to every point. Input already in that pattern is left untouched.
///
/// The zeros of the pattern are set exactly; `x` and `y'` come out
/// positive unless the input was already canonical.
pub fn canonical_frame(
    points: &[[BigFloat; 4]],
    designated: [usize; 3],
) -> Result<(RigidTransform, Vec<[BigFloat; 4]>), UpgradeError> {
    let get = |i: usize| {
        points
            .get(i)
            .ok_or_else(|| UpgradeError::DegenerateFrame(format!("no point {i}")))
    };
    let (o, a, b) = (get(designated[0])?, get(designated[1])?, get(designated[2])?);
    if [o, a, b].iter().any(|p| p[3].is_zero()) {
        return Err(UpgradeError::DegenerateFrame("designated point at infinity".into()));
    }
    let prec = points.iter().flatten().map(|v| v.precision()).max().unwrap_or(64);
    let (o3, a3, b3) = (affine(o), affine(a), affine(b));

    let canonical = o3.iter().all(|v| v.is_zero())
        && !a3[0].is_zero()
        && a3[1].is_zero()
        && a3[2].is_zero()
        && !b3[1].is_zero()
        && b3[2].is_zero();
    let transform = if canonical {
        RigidTransform::identity(prec)
    } else {
        let u = sub(&a3, &o3);
        let v = sub(&b3, &o3);
        let nu = norm(&u);
        let scale_ref = [norm(&o3), norm(&a3), norm(&b3)]
            .into_iter()
            .max_by(|x, y| x.cmp_value(y))
            .unwrap();
        if negligible(&nu, &scale_ref, prec) {
            return Err(UpgradeError::DegenerateFrame("first two designated points coincide".into()));
        }
        let e1 = scale(&u, &nu.recip().unwrap());
        let w = sub(&v, &scale(&e1, &dot(&v, &e1)));
        let nw = norm(&w);
        if negligible(&nw, &norm(&v), prec) {
            return Err(UpgradeError::DegenerateFrame("designated points are collinear".into()));
        }
        let e2 = scale(&w, &nw.recip().unwrap());
        let e3 = cross(&e1, &e2);
        let rotation = [e1, e2, e3];
        let ro: [BigFloat; 3] = std::array::from_fn(|r| dot(&rotation[r], &o3));
        RigidTransform {
            rotation,
            translation: std::array::from_fn(|k| ro[k].neg()),
        }
    };

    let mut out: Vec<[BigFloat; 4]> = points.iter().map(|p| transform.apply(p)).collect();
    let zero = BigFloat::zero(prec);
    for c in &mut out[designated[0]][..3] {
        *c = zero.clone();
    }
    out[designated[1]][1] = zero.clone();
    out[designated[1]][2] = zero.clone();
    out[designated[2]][2] = zero;
    Ok((transform, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn pt(v: [f64; 3]) -> [BigFloat; 4] {
        [v[0], v[1], v[2], 1.0].map(|x| BigFloat::from_f64(x, P))
    }

    fn close(a: &BigFloat, b: &BigFloat) -> bool {
        let d = a.sub(b);
        d.is_zero() || d.log2_magnitude().unwrap() < -(P as i64) + 16
    }

    #[test]
    fn canonical_input_is_left_alone() {
        let pts = vec![pt([0.0, 0.0, 0.0]), pt([-3.0, 0.0, 0.0]), pt([1.5, 2.0, 0.0]), pt([4.0, 5.0, 6.0])];
        let (t, out) = canonical_frame(&pts, [0, 1, 2]).unwrap();
        assert!(t.is_identity());
        assert_eq!(out, pts);
    }

    #[test]
    fn y_axis_is_rotated_onto_x_axis() {
        let pts = vec![pt([0.0, 0.0, 0.0]), pt([0.0, 1.0, 0.0]), pt([0.0, 0.0, 1.0])];
        let (t, out) = canonical_frame(&pts, [0, 1, 2]).unwrap();
        // Expected rotation: rows e1 = (0,1,0), e2 = (0,0,1), e3 = (1,0,0).
        let expect = [[0, 1, 0], [0, 0, 1], [1, 0, 0]];
        for r in 0..3 {
            for c in 0..3 {
                assert!(close(&t.rotation[r][c], &BigFloat::from_i64(expect[r][c], P)));
            }
        }
        assert_eq!(out[1], pt([1.0, 0.0, 0.0]));
        assert_eq!(out[2], pt([0.0, 1.0, 0.0]));
    }

    #[test]
    fn general_points_get_the_pattern_and_keep_distances() {
        let raw = [[1.0, 2.0, 3.0], [4.0, -1.0, 2.5], [0.5, 0.25, -2.0], [7.0, 1.0, 1.0], [-3.0, 2.0, 9.0]];
        let pts: Vec<_> = raw.iter().map(|&v| pt(v)).collect();
        let (_, out) = canonical_frame(&pts, [0, 1, 2]).unwrap();
        assert!(out[0][..3].iter().all(|v| v.is_zero()));
        assert!(out[1][0].is_positive() && out[1][1].is_zero() && out[1][2].is_zero());
        assert!(out[2][1].is_positive() && out[2][2].is_zero());
        let dist = |p: &[BigFloat; 4], q: &[BigFloat; 4]| super::norm(&sub(&affine(p), &affine(q)));
        for i in 0..pts.len() {
            for j in 0..i {
                assert!(close(&dist(&pts[i], &pts[j]), &dist(&out[i], &out[j])));
            }
        }
    }

    #[test]
    fn degenerate_triples_are_rejected() {
        let collinear = vec![pt([1.0, 1.0, 1.0]), pt([2.0, 2.0, 2.0]), pt([4.0, 4.0, 4.0])];
        assert!(matches!(canonical_frame(&collinear, [0, 1, 2]), Err(UpgradeError::DegenerateFrame(_))));
        let coincide = vec![pt([1.0, 1.0, 1.0]), pt([1.0, 1.0, 1.0]), pt([4.0, 0.0, 4.0])];
        assert!(canonical_frame(&coincide, [0, 1, 2]).is_err());
        let mut inf = pt([1.0, 0.0, 0.0]);
        inf[3] = BigFloat::zero(P);
        let at_inf = vec![pt([0.0, 0.0, 1.0]), inf, pt([4.0, 0.0, 4.0])];
        assert!(canonical_frame(&at_inf, [0, 1, 2]).is_err());
    }
}
