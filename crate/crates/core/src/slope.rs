//! Slopes and the Farey graph.
//!
//! Vertices of the curve complexes of the once-punctured torus and the
//! four-holed sphere are rational slopes `p/q` together with `1/0`.  Edges
//! join slopes with `|ps - qr| = 1`, which is the Farey graph in both cases
//! (intersection one on the torus window, two on the four-holed sphere).
//!
//! Distances here are exact: the graph is a planar tessellation, so any path
//! from infinity into the open interval `(0,1)` has to pass through one of
//! the two gate vertices `0/1` or `1/1`.  Pushing the picture around by
//! `SL(2,Z)` turns that observation into a terminating recursion with
//! strictly decreasing denominators.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A slope `p/q` in lowest terms with canonical sign: `q > 0`, or `(1,0)`
/// for the slope at infinity.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slope {
    pub p: i64,
    pub q: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended gcd: returns `(g, x, y)` with `a*x + b*y = g`.
fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = egcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

impl Slope {
    /// Builds a slope from any integer pair, reducing and fixing the sign.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p == 0 && q == 0 {
            return Err(Error::InconsistentCoordinates("slope (0,0)".into()));
        }
        let g = gcd(p, q);
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 || (q == 0 && p < 0) {
            p = -p;
            q = -q;
        }
        Ok(Slope { p, q })
    }

    pub const INFINITY: Slope = Slope { p: 1, q: 0 };
    pub const ZERO: Slope = Slope { p: 0, q: 1 };
    pub const ONE: Slope = Slope { p: 1, q: 1 };

    /// `|p s - q r|`: geometric intersection number in the torus window.
    pub fn det_with(&self, other: &Slope) -> i64 {
        (self.p * other.q - self.q * other.p).abs()
    }

    /// Farey neighbors meet once on the torus.
    pub fn is_farey_neighbor(&self, other: &Slope) -> bool {
        self.det_with(other) == 1
    }

    /// The mediant `(p+r)/(q+s)`, the common Farey neighbor of two
    /// neighboring slopes on one side.
    pub fn mediant(&self, other: &Slope) -> Result<Slope> {
        Slope::new(self.p + other.p, self.q + other.q)
    }

    /// Effect of the `n`-th power of the Dehn twist about `core` on `self`,
    /// as the usual homological transvection `a + n <a, c> c`.
    pub fn twist_about(&self, core: &Slope, n: i64) -> Slope {
        let d = self.p * core.q - self.q * core.p;
        Slope::new(self.p - n * d * core.p, self.q - n * d * core.q)
            .expect("twist of a valid slope is valid")
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl fmt::Debug for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Slope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        let p: i64 = p
            .parse()
            .map_err(|_| Error::schema("/slope", format!("bad numerator {p:?}")))?;
        let q: i64 = q
            .parse()
            .map_err(|_| Error::schema("/slope", format!("bad denominator {q:?}")))?;
        Slope::new(p, q)
    }
}

/// A 2x2 integer matrix with determinant one, acting on slopes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Unimodular {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Unimodular {
    pub const IDENTITY: Unimodular = Unimodular { a: 1, b: 0, c: 0, d: 1 };

    /// Matrix sending `x` to infinity.
    pub fn sending_to_infinity(x: &Slope) -> Unimodular {
        let (_, r, s) = egcd(x.p, x.q);
        // x.p * r + x.q * s = 1, so [[r, s], [-q, p]] maps (p,q) to (1,0).
        Unimodular { a: r, b: s, c: -x.q, d: x.p }
    }

    pub fn apply(&self, x: &Slope) -> Slope {
        Slope::new(self.a * x.p + self.b * x.q, self.c * x.p + self.d * x.q)
            .expect("unimodular image of a slope is a slope")
    }

    pub fn inverse(&self) -> Unimodular {
        // det = 1, so the inverse is the adjugate.
        Unimodular { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn compose(&self, rhs: &Unimodular) -> Unimodular {
        Unimodular {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }

    fn translation(k: i64) -> Unimodular {
        Unimodular { a: 1, b: k, c: 0, d: 1 }
    }
}

/// Exact distance in the Farey graph.
pub fn farey_distance(x: &Slope, y: &Slope) -> u32 {
    farey_geodesic(x, y).len() as u32 - 1
}

/// An exact geodesic from `x` to `y` in the Farey graph, including both
/// endpoints.  Ties between the two gates are broken toward the `0/1` gate,
/// so the witness path is deterministic.
pub fn farey_geodesic(x: &Slope, y: &Slope) -> Vec<Slope> {
    let mut memo = HashMap::new();
    let mut path = vec![*x];
    let mut frame = Unimodular::sending_to_infinity(x);
    // Invariant: frame maps the original picture so that the current path
    // head is at infinity and the target is frame(y).
    loop {
        let target = frame.apply(y);
        if target == Slope::INFINITY {
            break;
        }
        if target.q == 0 || target.det_with(&Slope::INFINITY) == 1 {
            // target is an integer: one edge left.
            path.push(frame.inverse().apply(&target));
            break;
        }
        // Translate so the target lies in (0,1).
        let k = target.p.div_euclid(target.q);
        let t = Unimodular::translation(-k);
        frame = t.compose(&frame);
        let target = frame.apply(y);
        debug_assert!(target.q > 1 && target.p > 0 && target.p < target.q);
        // Choose the better gate: 0/1 or 1/1.
        let d0 = gate_distance(&gate_zero(&target), &mut memo);
        let d1 = gate_distance(&gate_one(&target), &mut memo);
        let gate = if d0 <= d1 { Slope::ZERO } else { Slope::ONE };
        path.push(frame.inverse().apply(&gate));
        let m = Unimodular::sending_to_infinity(&gate);
        frame = m.compose(&frame);
    }
    path
}

/// Image of `y` after sending the gate `0/1` to infinity.
fn gate_zero(y: &Slope) -> Slope {
    // [[0,-1],[1,0]]: (p,q) -> (-q, p)
    Slope::new(-y.q, y.p).unwrap()
}

/// Image of `y` after sending the gate `1/1` to infinity.
fn gate_one(y: &Slope) -> Slope {
    // [[1,-1],[1,0]] sends (1,1) to (0,1)?  Use M = [[0,-1],[1,-1]]:
    // (1,1) -> (-1, 0) = infinity; det = 0*(-1) - (-1)*1 = 1.
    Slope::new(-y.q, y.p - y.q).unwrap()
}

/// Distance from infinity to `y`, memoized on the canonical form of `y`.
fn gate_distance(y: &Slope, memo: &mut HashMap<Slope, u32>) -> u32 {
    if y.q == 0 {
        return 0;
    }
    if y.q == 1 || y.det_with(&Slope::INFINITY) == 1 {
        return 1;
    }
    let k = y.p.div_euclid(y.q);
    let y = Slope::new(y.p - k * y.q, y.q).unwrap();
    if let Some(&d) = memo.get(&y) {
        return d;
    }
    let d0 = gate_distance(&gate_zero(&y), memo);
    let d1 = gate_distance(&gate_one(&y), memo);
    let d = 1 + d0.min(d1);
    memo.insert(y, d);
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: i64, q: i64) -> Slope {
        Slope::new(p, q).unwrap()
    }

    #[test]
    fn canonical_form() {
        assert_eq!(s(2, 4), s(1, 2));
        assert_eq!(s(-1, -2), s(1, 2));
        assert_eq!(s(1, -2), s(-1, 2));
        assert_eq!(s(-3, 0), Slope::INFINITY);
        assert!(Slope::new(0, 0).is_err());
    }

    #[test]
    fn parse_roundtrip() {
        for text in ["1/0", "0/1", "-3/7", "5"] {
            let sl: Slope = text.parse().unwrap();
            let again: Slope = sl.to_string().parse().unwrap();
            assert_eq!(sl, again);
        }
    }

    #[test]
    fn neighbors_meet_once() {
        assert_eq!(Slope::ZERO.det_with(&Slope::INFINITY), 1);
        assert_eq!(s(1, 2).det_with(&s(3, 5)), 1);
        assert_eq!(s(1, 0).det_with(&s(1, 3)), 3);
    }

    #[test]
    fn twist_shifts_slope() {
        // Twisting 1/0 about 0/1 walks through the integer slopes.
        let a = Slope::INFINITY;
        let core = Slope::ZERO;
        let t = a.twist_about(&core, 1);
        assert_eq!(t.det_with(&core), 1);
        assert_eq!(t.q, 0i64.max(t.q)); // canonical sign
        let t5 = a.twist_about(&core, 5);
        assert_eq!(t5.det_with(&a), 5);
    }

    #[test]
    fn distance_small_cases() {
        assert_eq!(farey_distance(&s(0, 1), &s(0, 1)), 0);
        assert_eq!(farey_distance(&s(0, 1), &Slope::INFINITY), 1);
        assert_eq!(farey_distance(&s(1, 2), &s(3, 5)), 1);
        // 0/1 to 2/5: distance 2 via 1/2 or 1/3.
        assert_eq!(farey_distance(&s(0, 1), &s(2, 5)), 2);
    }

    #[test]
    fn geodesic_is_a_valid_path() {
        let x = s(0, 1);
        let y = s(13, 21);
        let path = farey_geodesic(&x, &y);
        assert_eq!(path.first(), Some(&x));
        assert_eq!(path.last(), Some(&y));
        for w in path.windows(2) {
            assert!(w[0].is_farey_neighbor(&w[1]), "{} !~ {}", w[0], w[1]);
        }
    }

    #[test]
    fn distance_symmetric_on_samples() {
        let samples = [s(0, 1), s(1, 0), s(2, 5), s(7, 3), s(-5, 8), s(13, 21)];
        for a in &samples {
            for b in &samples {
                assert_eq!(farey_distance(a, b), farey_distance(b, a));
            }
        }
    }
}
