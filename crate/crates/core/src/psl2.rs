//! Exact 2×2 integer matrices of determinant 1 taken up to sign, the
//! generators `A`, `B` of `Γ(2)`, the conjugates `X_j = B^-j A B^j`, and
//! decomposition of `Γ(2)` elements back into words in `A`, `B`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::words::{FreeWord, Letter, WordImage};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Psl2Error {
    #[error("determinant is {0}, expected 1")]
    Determinant(BigInt),
    #[error("matrix parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("matrix is not in Γ(2)")]
    NotInGamma2,
    #[error("greedy descent stalled at {0}")]
    DescentStalled(String),
}

/// `±[[a, b], [c, d]]` with `ad − bc = 1`, stored with the first nonzero
/// entry in reading order positive.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjectiveMatrix {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl ProjectiveMatrix {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self, Psl2Error> {
        let (a, b, c, d) = (a.into(), b.into(), c.into(), d.into());
        let det = &a * &d - &b * &c;
        if !det.is_one() {
            return Err(Psl2Error::Determinant(det));
        }
        Ok(Self::canonical(a, b, c, d))
    }

    fn canonical(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        let leading = [&a, &b, &c, &d]
            .into_iter()
            .find(|x| !x.is_zero())
            .expect("determinant 1 matrix has a nonzero entry");
        if leading.is_negative() {
            ProjectiveMatrix {
                a: -a,
                b: -b,
                c: -c,
                d: -d,
            }
        } else {
            ProjectiveMatrix { a, b, c, d }
        }
    }

    pub fn identity() -> Self {
        Self::canonical(BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one())
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn determinant(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn multiply(&self, y: &ProjectiveMatrix) -> ProjectiveMatrix {
        Self::canonical(
            &self.a * &y.a + &self.b * &y.c,
            &self.a * &y.b + &self.b * &y.d,
            &self.c * &y.a + &self.d * &y.c,
            &self.c * &y.b + &self.d * &y.d,
        )
    }

    pub fn inverse(&self) -> ProjectiveMatrix {
        Self::canonical(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    /// `|a| + |b| + |c| + |d|`.
    pub fn magnitude(&self) -> BigInt {
        self.entries().into_iter().map(|x| x.abs()).sum()
    }

    /// Congruent to the identity mod 2 (sign-independent).
    pub fn in_gamma2(&self) -> bool {
        self.a.is_odd() && self.d.is_odd() && self.b.is_even() && self.c.is_even()
    }
}

/// `A = [[1,2],[0,1]]`.
pub fn gen_a() -> ProjectiveMatrix {
    ProjectiveMatrix::new(1, 2, 0, 1).expect("det 1")
}

/// `B = [[1,0],[2,1]]`.
pub fn gen_b() -> ProjectiveMatrix {
    ProjectiveMatrix::new(1, 0, 2, 1).expect("det 1")
}

/// `X_j = B^-j · A · B^j`.
pub fn conjugate_generator(j: usize) -> ProjectiveMatrix {
    let b = gen_b();
    let b_inv = b.inverse();
    let mut x = gen_a();
    for _ in 0..j {
        x = b_inv.multiply(&x).multiply(&b);
    }
    x
}

/// `[X_0, …, X_{r-1}]`, free generators of a rank-`r` subgroup of `Γ(2)`.
pub fn free_generators(r: usize) -> Vec<ProjectiveMatrix> {
    (0..r).map(conjugate_generator).collect()
}

/// The reduced word over `x0 = A`, `x1 = B` evaluating to `x`, by greedy
/// left-peeling: repeatedly left-multiply by whichever of `A^∓1`, `B^∓1`
/// strictly lowers the magnitude most.
pub fn matrix_to_word(x: &ProjectiveMatrix) -> Result<FreeWord, Psl2Error> {
    if !x.in_gamma2() {
        return Err(Psl2Error::NotInGamma2);
    }
    let a = gen_a();
    let b = gen_b();
    // (letter peeled, matrix to left-multiply by)
    let moves = [
        (Letter::new(0, false), a.inverse()),
        (Letter::new(0, true), a.clone()),
        (Letter::new(1, false), b.inverse()),
        (Letter::new(1, true), b.clone()),
    ];
    let mut letters = Vec::new();
    let mut current = x.clone();
    let mut mu = current.magnitude();
    while !current.is_identity() {
        let best = moves
            .iter()
            .map(|(letter, m)| {
                let next = m.multiply(&current);
                let next_mu = next.magnitude();
                (next_mu, *letter, next)
            })
            .filter(|(next_mu, _, _)| *next_mu < mu)
            .min_by(|x, y| x.0.cmp(&y.0));
        let Some((next_mu, letter, next)) = best else {
            return Err(Psl2Error::DescentStalled(current.to_string()));
        };
        letters.push(letter);
        current = next;
        mu = next_mu;
    }
    Ok(crate::words::reduce(letters))
}

impl WordImage for ProjectiveMatrix {
    fn identity_like(&self) -> Self {
        ProjectiveMatrix::identity()
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.multiply(rhs)
    }

    fn inv(&self) -> Self {
        self.inverse()
    }
}

impl fmt::Display for ProjectiveMatrix {
    /// `[[a,b],[c,d]]`, no whitespace.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for ProjectiveMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ProjectiveMatrix {
    type Err = Psl2Error;

    /// Accepts `[[a,b],[c,d]]` with optional whitespace and either sign.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        let mut pos = 0;
        let err = |pos: usize, msg: &str| Psl2Error::Parse {
            pos,
            msg: msg.to_string(),
        };
        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        let expect = |pos: &mut usize, ch: u8| {
            skip_ws(pos);
            if *pos < bytes.len() && bytes[*pos] == ch {
                *pos += 1;
                Ok(())
            } else {
                Err(err(*pos, &format!("expected '{}'", ch as char)))
            }
        };
        let int = |pos: &mut usize| -> Result<BigInt, Psl2Error> {
            skip_ws(pos);
            let start = *pos;
            if *pos < bytes.len() && (bytes[*pos] == b'-' || bytes[*pos] == b'+') {
                *pos += 1;
            }
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            s[start..*pos]
                .parse()
                .map_err(|_| err(start, "expected integer"))
        };
        expect(&mut pos, b'[')?;
        expect(&mut pos, b'[')?;
        let a = int(&mut pos)?;
        expect(&mut pos, b',')?;
        let b = int(&mut pos)?;
        expect(&mut pos, b']')?;
        expect(&mut pos, b',')?;
        expect(&mut pos, b'[')?;
        let c = int(&mut pos)?;
        expect(&mut pos, b',')?;
        let d = int(&mut pos)?;
        expect(&mut pos, b']')?;
        expect(&mut pos, b']')?;
        skip_ws(&mut pos);
        if pos != bytes.len() {
            return Err(err(pos, "trailing input"));
        }
        ProjectiveMatrix::new(a, b, c, d)
    }
}
