//! Ternary forms, Gram matrices and discriminants.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat3, Vec3};

/// `f = ax² + by² + cz² + pyz + qzx + rxy`, positive definite with integer coefficients.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(try_from = "[i64; 6]", into = "[i64; 6]")]
pub struct TernaryForm {
    a: i64,
    b: i64,
    c: i64,
    p: i64,
    q: i64,
    r: i64,
}

impl TernaryForm {
    pub fn new(a: i64, b: i64, c: i64, p: i64, q: i64, r: i64) -> Result<Self> {
        let f = TernaryForm { a, b, c, p, q, r };
        let m = f.doubled_gram();
        let minor2 = m[0][0] as i128 * m[1][1] as i128 - (m[0][1] as i128).pow(2);
        if a <= 0 || minor2 <= 0 || linalg::det(&m) <= 0 {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(f)
    }

    pub fn diagonal(a: i64, b: i64, c: i64) -> Result<Self> {
        Self::new(a, b, c, 0, 0, 0)
    }

    /// From the matrix `2·Gram`, which must have even diagonal.
    pub fn from_doubled(m: &Mat3) -> Result<Self> {
        if m[0][0] % 2 != 0 || m[1][1] % 2 != 0 || m[2][2] % 2 != 0 {
            return Err(Error::NonIntegralResult);
        }
        Self::new(
            m[0][0] / 2,
            m[1][1] / 2,
            m[2][2] / 2,
            m[1][2],
            m[0][2],
            m[0][1],
        )
    }

    pub fn coefficients(&self) -> [i64; 6] {
        [self.a, self.b, self.c, self.p, self.q, self.r]
    }

    pub fn a(&self) -> i64 {
        self.a
    }
    pub fn b(&self) -> i64 {
        self.b
    }
    pub fn c(&self) -> i64 {
        self.c
    }

    /// `2·Gram`, an even integral symmetric matrix.
    pub fn doubled_gram(&self) -> Mat3 {
        [
            [2 * self.a, self.r, self.q],
            [self.r, 2 * self.b, self.p],
            [self.q, self.p, 2 * self.c],
        ]
    }

    pub fn gram(&self) -> GramMatrix {
        let m = self.doubled_gram();
        GramMatrix(m.map(|row| row.map(|x| Ratio::new(x, 2))))
    }

    pub fn from_gram(g: &GramMatrix) -> Result<Self> {
        let mut m = [[0i64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let v = g.0[i][j] * 2;
                if !v.is_integer() || g.0[i][j] != g.0[j][i] {
                    return Err(Error::NonIntegralResult);
                }
                m[i][j] = v.to_integer();
            }
        }
        Self::from_doubled(&m)
    }

    /// Gram entries `⟨a,b,c,s,t,u⟩` = diagonal, then `B(e₂,e₃)`, `B(e₁,e₃)`, `B(e₁,e₂)`.
    pub fn from_gram_entries(entries: [Ratio<i64>; 6]) -> Result<Self> {
        let [a, b, c, s, t, u] = entries;
        Self::from_gram(&GramMatrix([[a, u, t], [u, b, s], [t, s, c]]))
    }

    pub fn discriminant(&self) -> Discriminant {
        Discriminant {
            four_d: self.four_d(),
        }
    }

    /// `4·dL = det(2·Gram)/2`.
    pub fn four_d(&self) -> i64 {
        (linalg::det(&self.doubled_gram()) / 2) as i64
    }

    /// Value `Q(v)`.
    pub fn eval(&self, v: &Vec3) -> i64 {
        (linalg::bilinear(&self.doubled_gram(), v, v) / 2) as i64
    }

    /// Generator of the norm ideal (gcd of the coefficients).
    pub fn content(&self) -> i64 {
        self.coefficients().iter().fold(0, |g, x| g.gcd(x))
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    pub fn primitive_part(&self) -> TernaryForm {
        let g = self.content();
        let c = self.coefficients().map(|x| x / g);
        TernaryForm {
            a: c[0],
            b: c[1],
            c: c[2],
            p: c[3],
            q: c[4],
            r: c[5],
        }
    }

    /// The form of `L^s`.
    pub fn rescale(&self, s: Ratio<i64>) -> Result<TernaryForm> {
        if s <= Ratio::from_integer(0) {
            return Err(Error::NonIntegralResult);
        }
        let mut out = [0i64; 6];
        for (o, x) in out.iter_mut().zip(self.coefficients()) {
            let v = s * x;
            if !v.is_integer() {
                return Err(Error::NonIntegralResult);
            }
            *o = v.to_integer();
        }
        TernaryForm::new(out[0], out[1], out[2], out[3], out[4], out[5])
    }

    pub fn scale_by(&self, k: i64) -> Result<TernaryForm> {
        self.rescale(Ratio::from_integer(k))
    }

    /// The form on the lattice spanned by the columns of `basis` (in coordinates of `self`).
    pub fn transform(&self, basis: &Mat3) -> Result<TernaryForm> {
        let m = linalg::congruent(&self.doubled_gram(), basis).ok_or(Error::Overflow)?;
        Self::from_doubled(&m)
    }

    /// Emission in `gram:` syntax.
    pub fn gram_string(&self) -> String {
        let half = |x: i64| {
            if x % 2 == 0 {
                (x / 2).to_string()
            } else {
                let s = if x < 0 { "-" } else { "" };
                format!("{s}{}.5", x.abs() / 2)
            }
        };
        format!(
            "gram:{},{},{},{},{},{}",
            self.a,
            self.b,
            self.c,
            half(self.p),
            half(self.q),
            half(self.r)
        )
    }
}

impl From<TernaryForm> for [i64; 6] {
    fn from(f: TernaryForm) -> Self {
        f.coefficients()
    }
}

impl TryFrom<[i64; 6]> for TernaryForm {
    type Error = Error;
    fn try_from(c: [i64; 6]) -> Result<Self> {
        TernaryForm::new(c[0], c[1], c[2], c[3], c[4], c[5])
    }
}

impl fmt::Display for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{},{},{}",
            self.a, self.b, self.c, self.p, self.q, self.r
        )
    }
}

impl FromStr for TernaryForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (gram, body) = match s.strip_prefix("gram:") {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let body = body
            .trim_start_matches(['<', '⟨', '('])
            .trim_end_matches(['>', '⟩', ')']);
        let parts: Vec<&str> = body.split(',').map(str::trim).collect();
        if parts.len() != 6 {
            return Err(Error::Parse(format!(
                "expected 6 entries, found {}",
                parts.len()
            )));
        }
        if gram {
            let mut e = [Ratio::from_integer(0); 6];
            for (slot, text) in e.iter_mut().zip(&parts) {
                *slot = parse_half(text)?;
            }
            TernaryForm::from_gram_entries(e)
        } else {
            let mut c = [0i64; 6];
            for (slot, text) in c.iter_mut().zip(&parts) {
                *slot = text
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad integer {text:?}")))?;
            }
            TernaryForm::try_from(c)
        }
    }
}

fn parse_half(text: &str) -> Result<Ratio<i64>> {
    let bad = || Error::Parse(format!("bad entry {text:?}"));
    if let Some((int, frac)) = text.split_once('.') {
        let neg = int.starts_with('-');
        let whole: i64 = if int == "-" || int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac = frac.trim_end_matches('0');
        let half = match frac {
            "" => 0,
            "5" => 1,
            _ => return Err(Error::NonIntegralResult),
        };
        let twice = 2 * whole.abs() + half;
        Ok(Ratio::new(if neg { -twice } else { twice }, 2))
    } else if let Some((n, d)) = text.split_once('/') {
        let n: i64 = n.parse().map_err(|_| bad())?;
        let d: i64 = d.parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        Ok(Ratio::new(n, d))
    } else {
        Ok(Ratio::from_integer(text.parse().map_err(|_| bad())?))
    }
}

/// Symmetric matrix of exact `B`-values.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GramMatrix(pub [[Ratio<i64>; 3]; 3]);

impl GramMatrix {
    pub fn determinant(&self) -> Ratio<i64> {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }
}

/// `dL = det(Gram)`, stored through the integer `4·dL`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Discriminant {
    pub four_d: i64,
}

impl Discriminant {
    pub fn value(&self) -> Ratio<i64> {
        Ratio::new(self.four_d, 4)
    }
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gram_round_trip() {
        let n6: TernaryForm = "gram:12,28,83,12,4,-4".parse().unwrap();
        assert_eq!(n6.coefficients(), [12, 28, 83, 24, 8, -8]);
        assert_eq!(TernaryForm::from_gram(&n6.gram()).unwrap(), n6);
        assert_eq!(n6.gram_string().parse::<TernaryForm>().unwrap(), n6);
        let f: TernaryForm = "1,1,1,1,1,1".parse().unwrap();
        assert_eq!(f.gram().0[0][1], Ratio::new(1, 2));
        assert_eq!(f.gram_string(), "gram:1,1,1,0.5,0.5,0.5");
        assert_eq!(
            "gram:1,1,1,-0.5,0,0"
                .parse::<TernaryForm>()
                .unwrap()
                .coefficients(),
            [1, 1, 1, -1, 0, 0]
        );
    }

    #[test]
    fn discriminants() {
        let n1: TernaryForm = "gram:12,15,135,5,0,0".parse().unwrap();
        assert_eq!(n1.discriminant().value(), Ratio::from_integer(24000));
        assert_eq!(n1.gram().determinant(), Ratio::from_integer(24000));
        let f: TernaryForm = "1,1,1,1,1,1".parse().unwrap();
        assert_eq!(f.discriminant().value(), Ratio::new(1, 2));
        assert_eq!(f.gram().determinant(), Ratio::new(1, 2));
    }

    #[test]
    fn rejects_degenerate() {
        assert_eq!(
            "1,1,0,0,0,0".parse::<TernaryForm>(),
            Err(Error::NotPositiveDefinite)
        );
        assert_eq!(
            "1,1,1,0,0,2".parse::<TernaryForm>(),
            Err(Error::NotPositiveDefinite)
        );
        assert!("gram:1,1,1,0.25,0,0".parse::<TernaryForm>().is_err());
    }

    #[test]
    fn rescaling() {
        let m1 = TernaryForm::diagonal(1, 20, 80).unwrap();
        let big = m1.rescale(Ratio::from_integer(15)).unwrap();
        assert_eq!(big, TernaryForm::diagonal(15, 300, 1200).unwrap());
        assert_eq!(big.rescale(Ratio::new(1, 15)).unwrap(), m1);
        let one = TernaryForm::diagonal(1, 1, 1).unwrap();
        assert_eq!(one.rescale(Ratio::new(1, 2)), Err(Error::NonIntegralResult));
        assert_eq!(
            one.scale_by(2).unwrap().discriminant().value(),
            Ratio::from_integer(8)
        );
    }
}
