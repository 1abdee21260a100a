//! Exact rational dynamics on the torus `𝕋²`.
//!
//! The torus is the square `[-1/2, 1/2] × [-1/2, 1/2]` with opposite sides
//! identified; points are kept as canonical representatives in
//! `[-1/2, 1/2)` so equality is structural and all arithmetic is exact
//! mod 1. On top of it live the Anosov automorphisms `A(k, m)`, the toral
//! linked twist map built from the two shears `f` and `h` on the annuli
//! `P = [-1/2,1/2] × [-1/k,1/k]` and `Q = [-1/m,1/m] × [-1/2,1/2]`, and
//! the quotient onto the "pillow" orbifold together with the induced disk
//! map on `p(R)`, `R = P ∪ Q`.
//!
//! The metric used throughout is the ℓ∞ torus metric (max of wrapped
//! coordinate distances): exact on rationals, diameter `1/2`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::rat::Rat;

/// Canonical coordinate in `[-1/2, 1/2)`.
fn canon(r: &Rat) -> Rat {
    let f = r.fract(); // [0, 1)
    if f >= Rat::new(1, 2) {
        f - Rat::one()
    } else {
        f
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TorusPoint {
    x: Rat,
    y: Rat,
}

impl TorusPoint {
    pub fn new(x: Rat, y: Rat) -> Self {
        TorusPoint {
            x: canon(&x),
            y: canon(&y),
        }
    }

    pub fn origin() -> Self {
        TorusPoint {
            x: Rat::zero(),
            y: Rat::zero(),
        }
    }

    pub fn x(&self) -> &Rat {
        &self.x
    }

    pub fn y(&self) -> &Rat {
        &self.y
    }

    pub fn neg(&self) -> Self {
        TorusPoint::new(-&self.x, -&self.y)
    }
}

impl std::fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}, {}", self.x, self.y)
    }
}

/// Wrapped distance of two circle coordinates: `min(|a-b| mod 1, 1 - ...)`,
/// in `[0, 1/2]`.
fn circle_dist(a: &Rat, b: &Rat) -> Rat {
    let d = canon(&(a - b));
    d.abs()
}

/// ℓ∞ torus metric, exact.
pub fn torus_dist(p: &TorusPoint, q: &TorusPoint) -> Rat {
    circle_dist(&p.x, &q.x).max(circle_dist(&p.y, &q.y))
}

// --- Anosov automorphisms ---------------------------------------------------

/// Integer matrix `(a b; c d)` with `ad - bc = 1` and `a + d > 2`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct AnosovMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl AnosovMatrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a
            .checked_mul(d)
            .and_then(|ad| b.checked_mul(c).and_then(|bc| ad.checked_sub(bc)));
        match det {
            Some(1) => {}
            Some(det) => {
                return Err(Error::ConstructorPrecondition(format!(
                    "determinant must be 1, got {det} for ({a}, {b}; {c}, {d})"
                )))
            }
            None => {
                return Err(Error::ConstructorPrecondition(
                    "matrix entries too large".into(),
                ))
            }
        }
        if a.saturating_add(d) <= 2 {
            return Err(Error::ConstructorPrecondition(format!(
                "trace must exceed 2, got {}",
                a.saturating_add(d)
            )));
        }
        Ok(AnosovMatrix { a, b, c, d })
    }

    /// The family `A(k, m) = (1, k; m, 1 + km)` with `k, m >= 3`.
    pub fn family(k: i64, m: i64) -> Result<Self> {
        if k < 3 || m < 3 {
            return Err(Error::ConstructorPrecondition(format!(
                "A(k, m) requires k, m >= 3, got k={k}, m={m}"
            )));
        }
        let km = k
            .checked_mul(m)
            .ok_or_else(|| Error::ConstructorPrecondition("k*m overflows".into()))?;
        AnosovMatrix::new(1, k, m, 1 + km)
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }

    /// `(d, -b; -c, a)` — inverse in `SL(2, ℤ)`.
    pub fn inverse(&self) -> AnosovMatrix {
        AnosovMatrix {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }
}

/// `(x, y) ↦ (a x + b y, c x + d y) mod 1`.
pub fn anosov_apply(mat: &AnosovMatrix, p: &TorusPoint) -> TorusPoint {
    let x = Rat::from_int(mat.a) * &p.x + Rat::from_int(mat.b) * &p.y;
    let y = Rat::from_int(mat.c) * &p.x + Rat::from_int(mat.d) * &p.y;
    TorusPoint::new(x, y)
}

// --- linked twist maps -------------------------------------------------------

/// `p ∈ P = [-1/2,1/2] × [-1/k, 1/k]` (closed, seam-aware).
pub fn in_p(p: &TorusPoint, k: i64) -> bool {
    p.y.abs() <= Rat::new(1, k)
}

/// `p ∈ Q = [-1/m, 1/m] × [-1/2, 1/2]` (closed, seam-aware).
pub fn in_q(p: &TorusPoint, m: i64) -> bool {
    p.x.abs() <= Rat::new(1, m)
}

/// `p ∈ R = P ∪ Q`.
pub fn in_r(p: &TorusPoint, k: i64, m: i64) -> bool {
    in_p(p, k) || in_q(p, m)
}

fn require_in_r(p: &TorusPoint, k: i64, m: i64) -> Result<()> {
    if in_r(p, k, m) {
        Ok(())
    } else {
        Err(Error::OutsideDomain(format!("({p}) with k={k}, m={m}")))
    }
}

/// Horizontal shear `f(x, y) = (x + ky, y)` on `P`, identity on `R∖P`.
/// Well defined on `∂P`: at `y = ±1/k` the shift is by exactly one turn.
pub fn twist_f(p: &TorusPoint, k: i64, m: i64) -> Result<TorusPoint> {
    require_in_r(p, k, m)?;
    Ok(twist_f_ext(p, k))
}

/// Vertical shear `h(x, y) = (x, y + mx)` on `Q`, identity on `R∖Q`.
pub fn twist_h(p: &TorusPoint, k: i64, m: i64) -> Result<TorusPoint> {
    require_in_r(p, k, m)?;
    Ok(twist_h_ext(p, m))
}

fn twist_f_ext(p: &TorusPoint, k: i64) -> TorusPoint {
    if in_p(p, k) {
        TorusPoint::new(&p.x + Rat::from_int(k) * &p.y, p.y.clone())
    } else {
        p.clone()
    }
}

fn twist_h_ext(p: &TorusPoint, m: i64) -> TorusPoint {
    if in_q(p, m) {
        TorusPoint::new(p.x.clone(), &p.y + Rat::from_int(m) * &p.x)
    } else {
        p.clone()
    }
}

/// The toral linked twist map `g = h ∘ f`, extended to the whole torus by
/// the identity on `𝕋²∖R`. Total: `f` maps `R` into `R` (it fixes `y`),
/// and the two shears agree with the identity across `∂P`, `∂Q`.
pub fn linked_twist(p: &TorusPoint, k: i64, m: i64) -> TorusPoint {
    if in_r(p, k, m) {
        twist_h_ext(&twist_f_ext(p, k), m)
    } else {
        p.clone()
    }
}

/// Inverse of the extended linked twist: `g⁻¹ = f⁻¹ ∘ h⁻¹`.
pub fn linked_twist_inv(p: &TorusPoint, k: i64, m: i64) -> TorusPoint {
    if !in_r(p, k, m) {
        return p.clone();
    }
    let q = if in_q(p, m) {
        TorusPoint::new(p.x.clone(), &p.y - Rat::from_int(m) * &p.x)
    } else {
        p.clone()
    };
    if in_p(&q, k) {
        TorusPoint::new(&q.x - Rat::from_int(k) * &q.y, q.y.clone())
    } else {
        q
    }
}

/// Radius of a closed ℓ∞ ball around the origin on which the linked twist
/// agrees with the linear map `A(k, m)`: it suffices that `|y| <= 1/k` and
/// `|x + ky| <= 1/m` hold as real numbers, which `|x|, |y| <= 1/(m(k+1))`
/// guarantees.
pub fn linearization_radius(k: i64, m: i64) -> Rat {
    Rat::new(1, m * (k + 1))
}

// --- the pillow quotient ------------------------------------------------------

/// Point of the quotient `𝕋²/{±1}` ("pillow", a topological sphere with
/// four singular points). The canonical representative has `y > 0`, with
/// the tie `x >= 0` (or `x = -1/2`) on the two circles `y ∈ {0, -1/2}`
/// fixed by the involution.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PillowPoint {
    rep: TorusPoint,
}

/// Quotient map `p: 𝕋² → 𝒩`; constant on `{(x,y), (-x,-y)}` classes.
pub fn pillow_project(p: &TorusPoint) -> PillowPoint {
    let neg = p.neg();
    let half = Rat::new(-1, 2);
    let rep = if p.y.is_positive() {
        p.clone()
    } else if neg.y.is_positive() {
        neg
    } else {
        // y ∈ {0, -1/2}: the involution acts on x alone; tie-break x >= 0,
        // with x = -1/2 on the seam fixed.
        if !p.x.is_negative() || p.x == half {
            p.clone()
        } else {
            neg
        }
    };
    PillowPoint { rep }
}

impl PillowPoint {
    /// The canonical lift.
    pub fn lift(&self) -> &TorusPoint {
        &self.rep
    }

    /// Both lifts (equal for the four singular classes).
    pub fn lifts(&self) -> (TorusPoint, TorusPoint) {
        (self.rep.clone(), self.rep.neg())
    }

    pub fn is_singular(&self) -> bool {
        self.rep == self.rep.neg()
    }
}

impl std::fmt::Display for PillowPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.rep)
    }
}

/// Quotient ℓ∞ metric on the pillow: minimum over lifts. A metric because
/// the involution is an isometry of the flat torus.
pub fn pillow_dist(p: &PillowPoint, q: &PillowPoint) -> Rat {
    let d1 = torus_dist(&p.rep, &q.rep);
    let d2 = torus_dist(&p.rep, &q.rep.neg());
    d1.min(d2)
}

/// Membership in the closed disk `B² = p(R)`.
pub fn in_disk(q: &PillowPoint, k: i64, m: i64) -> bool {
    in_r(&q.rep, k, m) || in_r(&q.rep.neg(), k, m)
}

/// The induced map `g_{B²}` on the disk `p(R)`: lift, apply the linked
/// twist, project. Lift-independent because `g(-x, -y) = -g(x, y)`.
pub fn disk_map(q: &PillowPoint, k: i64, m: i64) -> Result<PillowPoint> {
    let (l1, l2) = q.lifts();
    let lift = if in_r(&l1, k, m) {
        l1
    } else if in_r(&l2, k, m) {
        l2
    } else {
        return Err(Error::OutsideDisk(format!("({q}) with k={k}, m={m}")));
    };
    Ok(pillow_project(&linked_twist(&lift, k, m)))
}

/// Inverse disk map.
pub fn disk_map_inv(q: &PillowPoint, k: i64, m: i64) -> Result<PillowPoint> {
    let (l1, l2) = q.lifts();
    let lift = if in_r(&l1, k, m) {
        l1
    } else if in_r(&l2, k, m) {
        l2
    } else {
        return Err(Error::OutsideDisk(format!("({q}) with k={k}, m={m}")));
    };
    Ok(pillow_project(&linked_twist_inv(&lift, k, m)))
}

// --- samplers and meshes -------------------------------------------------------

/// Rational point with denominators at most `max_den`.
pub(crate) fn sample_torus<R: Rng>(rng: &mut R, max_den: i64) -> TorusPoint {
    let coord = |rng: &mut R| {
        let den = rng.gen_range(1..=max_den);
        let num = rng.gen_range(-den..den);
        Rat::new(num, 2 * den)
    };
    let x = coord(rng);
    let y = coord(rng);
    TorusPoint::new(x, y)
}

/// Point of the open ℓ∞ ball `D_radius(center)`: each coordinate moves by
/// `radius · j/M` with `|j| < M`.
pub(crate) fn sample_ball_torus<R: Rng>(
    center: &TorusPoint,
    radius: &Rat,
    rng: &mut R,
) -> TorusPoint {
    const M: i64 = 64;
    let delta = |rng: &mut R| radius * Rat::new(rng.gen_range(-(M - 1)..M), M);
    let dx = delta(rng);
    let dy = delta(rng);
    TorusPoint::new(&center.x + dx, &center.y + dy)
}

/// Random point of `R = P ∪ Q` (used as probe sampler for twist systems):
/// squeezes one coordinate into the matching annulus.
pub(crate) fn sample_in_r<R: Rng>(rng: &mut R, k: i64, m: i64, max_den: i64) -> TorusPoint {
    let p = sample_torus(rng, max_den);
    let p = if rng.gen_bool(0.5) {
        TorusPoint::new(p.x.clone(), &p.y * Rat::new(1, k))
    } else {
        TorusPoint::new(&p.x * Rat::new(1, m), p.y.clone())
    };
    debug_assert!(in_r(&p, k, m));
    p
}

/// Closest point of the `(1/q)`-grid; its orbit under any integer-matrix
/// torus map is finite (denominators are preserved).
pub fn nearest_rational_grid(p: &TorusPoint, q: i64) -> TorusPoint {
    let qr = Rat::from_int(q);
    let x = Rat::from_big(Rat::round_nearest(&(&p.x * &qr)), q.into()).expect("q > 0");
    let y = Rat::from_big(Rat::round_nearest(&(&p.y * &qr)), q.into()).expect("q > 0");
    TorusPoint::new(x, y)
}

/// Rational mesh of `∂R`: the segments of `∂P` with `|x| >= 1/m` and of
/// `∂Q` with `|y| >= 1/k`, corners included.
pub fn boundary_r_mesh(k: i64, m: i64, steps: i64) -> Vec<TorusPoint> {
    let mut points = Vec::new();
    let half = Rat::new(1, 2);
    let step = |a: &Rat, b: &Rat, t: i64| a + (b - a) * Rat::new(t, steps);
    for t in 0..=steps {
        // horizontal edges of P outside int Q: x from 1/m to 1/2
        let x = step(&Rat::new(1, m), &half, t);
        for sx in [1i64, -1] {
            for sy in [1i64, -1] {
                points.push(TorusPoint::new(Rat::from_int(sx) * &x, Rat::new(sy, k)));
            }
        }
        // vertical edges of Q outside int P: y from 1/k to 1/2
        let y = step(&Rat::new(1, k), &half, t);
        for sx in [1i64, -1] {
            for sy in [1i64, -1] {
                points.push(TorusPoint::new(Rat::new(sx, m), Rat::from_int(sy) * &y));
            }
        }
    }
    points.sort();
    points.dedup();
    points
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(x: (i64, i64), y: (i64, i64)) -> TorusPoint {
        TorusPoint::new(Rat::new(x.0, x.1), Rat::new(y.0, y.1))
    }

    #[test]
    fn canonical_range() {
        let p = pt((1, 2), (3, 2));
        assert_eq!(p, pt((-1, 2), (1, 2)));
        assert_eq!(p.x(), &Rat::new(-1, 2));
        assert_eq!(p.y(), &Rat::new(-1, 2));
        assert_eq!(pt((0, 1), (0, 1)).neg(), pt((0, 1), (0, 1)));
        // -(-1/2) wraps back to -1/2
        assert_eq!(pt((-1, 2), (1, 4)).neg(), pt((-1, 2), (-1, 4)));
    }

    #[test]
    fn anosov_family_det_trace() {
        for k in 3..=12 {
            for m in 3..=12 {
                let a = AnosovMatrix::family(k, m).unwrap();
                assert_eq!(a.det(), 1);
                assert_eq!(a.trace(), 2 + k * m);
                assert!(a.trace() > 2);
            }
        }
        assert!(AnosovMatrix::family(2, 3).is_err());
        assert!(AnosovMatrix::new(1, 0, 0, 1).is_err()); // trace 2
        assert!(AnosovMatrix::new(1, 1, 1, 1).is_err()); // det 0
    }

    #[test]
    fn anosov_apply_examples() {
        let a33 = AnosovMatrix::family(3, 3).unwrap();
        assert_eq!(
            anosov_apply(&a33, &TorusPoint::origin()),
            TorusPoint::origin()
        );
        // (1/2, 1/2) ↦ (2, 13/2) ≡ (0, 1/2) mod 1
        let img = anosov_apply(&a33, &pt((1, 2), (1, 2)));
        assert_eq!(img, pt((0, 1), (1, 2)));
    }

    #[test]
    fn region_membership() {
        let (k, m) = (3, 3);
        assert!(in_p(&TorusPoint::origin(), k));
        assert!(in_q(&TorusPoint::origin(), m));
        assert!(in_r(&TorusPoint::origin(), k, m));
        // 3/10 <= 1/3, so (3/10, 1/3) lies in P and in Q
        let p = pt((3, 10), (1, 3));
        assert!(in_p(&p, k));
        assert!(in_q(&p, m));
        let corner = pt((-1, 2), (-1, 2));
        assert!(!in_p(&corner, k));
        assert!(!in_q(&corner, m));
        assert!(!in_r(&corner, k, m));
        assert!(matches!(
            twist_f(&corner, k, m),
            Err(Error::OutsideDomain(_))
        ));
    }

    #[test]
    fn twist_examples() {
        let (k, m) = (3, 3);
        let id = twist_f(&TorusPoint::origin(), k, m).unwrap();
        assert_eq!(id, TorusPoint::origin());
        // y = 1/k: shear by exactly one turn
        let p = pt((1, 4), (1, 3));
        assert_eq!(twist_f(&p, k, m).unwrap(), p);
        // (0, 1/(2k)) ↦ (1/2, 1/(2k))
        let p = pt((0, 1), (1, 6));
        assert_eq!(twist_f(&p, k, m).unwrap(), pt((1, 2), (1, 6)));
        // mirrored for h
        let p = pt((1, 3), (1, 4));
        assert_eq!(twist_h(&p, k, m).unwrap(), p);
        let p = pt((1, 6), (0, 1));
        assert_eq!(twist_h(&p, k, m).unwrap(), pt((1, 6), (1, 2)));
    }

    #[test]
    fn linked_twist_values() {
        let (k, m) = (3, 3);
        assert_eq!(
            linked_twist(&TorusPoint::origin(), k, m),
            TorusPoint::origin()
        );
        // (1/6, 1/6): f → (2/3 ≡ -1/3, 1/6); still in Q; h → (-1/3, 1/6 - 1)
        assert_eq!(linked_twist(&pt((1, 6), (1, 6)), k, m), pt((-1, 3), (1, 6)));
        // (3/10, 1/3): f wraps by one turn, h acts since 3/10 <= 1/3
        assert_eq!(
            linked_twist(&pt((3, 10), (1, 3)), k, m),
            pt((3, 10), (7, 30))
        );
        // outside R: identity by extension
        let far = pt((-1, 2), (-1, 2));
        assert_eq!(linked_twist(&far, k, m), far);
    }

    #[test]
    fn boundary_identity_on_mesh() {
        for (k, m) in [(3, 3), (3, 4), (5, 3)] {
            for p in boundary_r_mesh(k, m, 16) {
                assert!(in_r(&p, k, m), "mesh point must lie in R");
                assert_eq!(linked_twist(&p, k, m), p, "g|∂R = id at {p} (k={k}, m={m})");
            }
        }
    }

    #[test]
    fn linearization_near_origin() {
        for (k, m) in [(3, 3), (4, 3), (3, 5)] {
            let a = AnosovMatrix::family(k, m).unwrap();
            let r = linearization_radius(k, m);
            let mesh = 8i64;
            for i in -mesh..=mesh {
                for j in -mesh..=mesh {
                    let p = TorusPoint::new(&r * Rat::new(i, mesh), &r * Rat::new(j, mesh));
                    assert_eq!(
                        linked_twist(&p, k, m),
                        anosov_apply(&a, &p),
                        "g = A(k,m) near 0 fails at {p} (k={k}, m={m})"
                    );
                }
            }
        }
    }

    #[test]
    fn pillow_projection_examples() {
        assert_eq!(
            pillow_project(&pt((1, 4), (1, 4))),
            pillow_project(&pt((-1, 4), (-1, 4)))
        );
        let origin = pillow_project(&TorusPoint::origin());
        assert!(origin.is_singular());
        assert_eq!(origin.lift(), &TorusPoint::origin());
        // y > 0 wins
        let q = pillow_project(&pt((-1, 2), (1, 3)));
        assert_eq!(q.lift(), &pt((-1, 2), (1, 3)));
        // ties on y = 0 resolve to x >= 0
        assert_eq!(
            pillow_project(&pt((-1, 4), (0, 1))).lift(),
            &pt((1, 4), (0, 1))
        );
        // all four singular classes are fixed points of the involution
        for s in [
            pt((0, 1), (0, 1)),
            pt((-1, 2), (0, 1)),
            pt((0, 1), (-1, 2)),
            pt((-1, 2), (-1, 2)),
        ] {
            assert!(pillow_project(&s).is_singular());
            assert_eq!(pillow_project(&s).lift(), &s);
        }
    }

    #[test]
    fn disk_map_fixes_singular_origin_and_boundary() {
        let (k, m) = (3, 3);
        let origin = pillow_project(&TorusPoint::origin());
        assert_eq!(disk_map(&origin, k, m).unwrap(), origin);
        for p in boundary_r_mesh(k, m, 12) {
            let q = pillow_project(&p);
            assert_eq!(disk_map(&q, k, m).unwrap(), q);
        }
        let outside = pillow_project(&pt((-1, 2), (-1, 2)));
        assert!(matches!(
            disk_map(&outside, k, m),
            Err(Error::OutsideDisk(_))
        ));
    }

    proptest! {
        #[test]
        fn anosov_inverse_law(seed in 0u64..400) {
            let mut rng = seeded(seed);
            let a = AnosovMatrix::family(3, 4).unwrap();
            let p = sample_torus(&mut rng, 50);
            let back = anosov_apply(&a.inverse(), &anosov_apply(&a, &p));
            prop_assert_eq!(back, p);
        }

        #[test]
        fn odd_symmetry_of_linked_twist(seed in 0u64..400) {
            let mut rng = seeded(seed);
            let (k, m) = (3, 4);
            let p = sample_torus(&mut rng, 60);
            prop_assert_eq!(linked_twist(&p.neg(), k, m), linked_twist(&p, k, m).neg());
        }

        #[test]
        fn linked_twist_inverse_law(seed in 0u64..400) {
            let mut rng = seeded(seed);
            let (k, m) = (4, 3);
            let p = sample_torus(&mut rng, 60);
            prop_assert_eq!(linked_twist_inv(&linked_twist(&p, k, m), k, m), p.clone());
            prop_assert_eq!(linked_twist(&linked_twist_inv(&p, k, m), k, m), p);
        }

        #[test]
        fn quotient_commutes(seed in 0u64..400) {
            let mut rng = seeded(seed);
            let (k, m) = (3, 3);
            let p = sample_in_r(&mut rng, k, m, 40);
            let lhs = pillow_project(&linked_twist(&p, k, m));
            let rhs = disk_map(&pillow_project(&p), k, m).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn disk_map_is_lift_independent(seed in 0u64..400) {
            // R is symmetric under negation, so both lifts are available;
            // the induced map must not depend on the choice
            let mut rng = seeded(seed);
            let (k, m) = (3, 4);
            let p = sample_in_r(&mut rng, k, m, 50);
            prop_assert!(in_r(&p.neg(), k, m));
            let via_p = pillow_project(&linked_twist(&p, k, m));
            let via_neg = pillow_project(&linked_twist(&p.neg(), k, m));
            prop_assert_eq!(via_p, via_neg);
        }

        #[test]
        fn disk_map_inverse_law(seed in 0u64..400) {
            let mut rng = seeded(seed);
            let (k, m) = (4, 3);
            let q = pillow_project(&sample_in_r(&mut rng, k, m, 50));
            let forward = disk_map(&q, k, m).unwrap();
            prop_assert_eq!(disk_map_inv(&forward, k, m).unwrap(), q.clone());
            let backward = disk_map_inv(&q, k, m).unwrap();
            prop_assert_eq!(disk_map(&backward, k, m).unwrap(), q);
        }

        #[test]
        fn pillow_projection_is_involution_invariant(seed in 0u64..400) {
            let mut rng = seeded(seed);
            let p = sample_torus(&mut rng, 60);
            prop_assert_eq!(pillow_project(&p), pillow_project(&p.neg()));
            // the quotient metric never exceeds the torus metric
            let q = sample_torus(&mut rng, 60);
            prop_assert!(pillow_dist(&pillow_project(&p), &pillow_project(&q)) <= torus_dist(&p, &q));
        }

        #[test]
        fn grid_oracle_is_close(seed in 0u64..200) {
            let mut rng = seeded(seed);
            let p = sample_torus(&mut rng, 97);
            let q = 16i64;
            let g = nearest_rational_grid(&p, q);
            prop_assert!(torus_dist(&p, &g) <= Rat::new(1, 2 * q));
        }
    }

    fn seeded(seed: u64) -> rand_chacha::ChaCha8Rng {
        use rand::SeedableRng;
        rand_chacha::ChaCha8Rng::seed_from_u64(seed)
    }
}
