use crate::error::{Error, Result};
use crate::scalar::{int, Rational};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize, PartialOrd, Ord)]
pub enum CartanType {
    A1,
    A2,
    A3,
    B2,
    G2,
}

impl CartanType {
    pub const ALL: [CartanType; 5] = [CartanType::A1, CartanType::A2, CartanType::A3, CartanType::B2, CartanType::G2];

    pub fn label(self) -> &'static str {
        match self {
            CartanType::A1 => "A1",
            CartanType::A2 => "A2",
            CartanType::A3 => "A3",
            CartanType::B2 => "B2",
            CartanType::G2 => "G2",
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for CartanType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CartanType::ALL
            .into_iter()
            .find(|t| t.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnsupportedType(s.to_string()))
    }
}

/// A weight in the root lattice, in simple-root coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize, PartialOrd, Ord)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn simple(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        Weight(v)
    }

    pub fn add(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * k).collect())
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&a| a >= 0)
    }
}

/// Root data of one supported simple type.
///
/// The Cartan matrix is `a_ij = 2 (α_i, α_j) / (α_i, α_i)` and the symmetrized form is
/// `(α_i, α_j) = d_i a_ij`, normalized so short roots have square length 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootDatum {
    pub cartan_type: CartanType,
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
    pub d: Vec<i64>,
    /// Positive roots sorted by height, simple roots first.
    pub positive_roots: Vec<Weight>,
    /// Fundamental weights in simple-root coordinates.
    pub fundamental_weights: Vec<Vec<Rational>>,
    /// Half the sum of positive roots, simple-root coordinates.
    pub rho: Vec<Rational>,
    pub max_root: Weight,
}

impl RootDatum {
    pub fn new(t: CartanType) -> Self {
        let (cartan, d): (Vec<Vec<i64>>, Vec<i64>) = match t {
            CartanType::A1 => (vec![vec![2]], vec![1]),
            CartanType::A2 => (vec![vec![2, -1], vec![-1, 2]], vec![1, 1]),
            CartanType::A3 => (vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]], vec![1, 1, 1]),
            // α1 long, α2 short
            CartanType::B2 => (vec![vec![2, -1], vec![-2, 2]], vec![2, 1]),
            // α1 short, α2 long
            CartanType::G2 => (vec![vec![2, -3], vec![-1, 2]], vec![1, 3]),
        };
        let rank = d.len();
        let mut dat = RootDatum {
            cartan_type: t,
            rank,
            cartan,
            d,
            positive_roots: Vec::new(),
            fundamental_weights: Vec::new(),
            rho: Vec::new(),
            max_root: Weight::zero(rank),
        };
        dat.positive_roots = dat.generate_positive_roots();
        dat.max_root = dat.positive_roots.last().unwrap().clone();
        let inv = invert_int(&dat.cartan);
        // ω_i has Dynkin labels e_i; coordinates c solve A c = e_i with labels_j = Σ_k a_jk c_k
        dat.fundamental_weights = (0..rank).map(|i| (0..rank).map(|k| inv[k][i].clone()).collect()).collect();
        let mut rho = vec![Rational::zero(); rank];
        for r in &dat.positive_roots {
            for (x, c) in rho.iter_mut().zip(&r.0) {
                *x += int(*c) / int(2);
            }
        }
        dat.rho = rho;
        dat
    }

    pub fn from_label(s: &str) -> Result<Self> {
        Ok(Self::new(s.parse()?))
    }

    fn generate_positive_roots(&self) -> Vec<Weight> {
        let r = self.rank;
        let mut roots: Vec<Weight> = (0..r).map(|i| Weight::simple(r, i)).collect();
        let mut frontier = roots.clone();
        while !frontier.is_empty() {
            let mut next: Vec<Weight> = Vec::new();
            for b in &frontier {
                for i in 0..r {
                    let mut p = 0;
                    let mut w = b.sub(&Weight::simple(r, i));
                    while roots.contains(&w) {
                        p += 1;
                        w = w.sub(&Weight::simple(r, i));
                    }
                    let qq = p - self.coroot_pairing(b, i);
                    let up = b.add(&Weight::simple(r, i));
                    if qq > 0 && !roots.contains(&up) && !next.contains(&up) {
                        next.push(up);
                    }
                }
            }
            roots.extend(next.iter().cloned());
            frontier = next;
        }
        roots.sort_by_key(|w| (w.height(), std::cmp::Reverse(w.0.clone())));
        roots
    }

    /// `(μ, ν)` for root-lattice weights.
    pub fn form(&self, a: &Weight, b: &Weight) -> i64 {
        let mut s = 0;
        for i in 0..self.rank {
            for j in 0..self.rank {
                s += a.0[i] * b.0[j] * self.d[i] * self.cartan[i][j];
            }
        }
        s
    }

    /// `(x, y)` for rational simple-root coordinates.
    pub fn form_q(&self, a: &[Rational], b: &[Rational]) -> Rational {
        let mut s = Rational::zero();
        for i in 0..self.rank {
            for j in 0..self.rank {
                s += &a[i] * &b[j] * int(self.d[i] * self.cartan[i][j]);
            }
        }
        s
    }

    /// `⟨μ, α_i^∨⟩`.
    pub fn coroot_pairing(&self, mu: &Weight, i: usize) -> i64 {
        (0..self.rank).map(|k| mu.0[k] * self.cartan[i][k]).sum()
    }

    /// Dynkin labels `⟨μ, α_i^∨⟩` of a root-lattice weight.
    pub fn dynkin_labels(&self, mu: &Weight) -> Vec<i64> {
        (0..self.rank).map(|i| self.coroot_pairing(mu, i)).collect()
    }

    /// Simple-root coordinates of the weight with the given Dynkin labels.
    pub fn from_dynkin(&self, labels: &[i64]) -> Vec<Rational> {
        (0..self.rank)
            .map(|k| (0..self.rank).map(|i| &self.fundamental_weights[i][k] * int(labels[i])).sum())
            .collect()
    }

    /// Root-lattice weight with the given Dynkin labels, if it lies in the root lattice.
    pub fn root_lattice_weight(&self, labels: &[i64]) -> Option<Weight> {
        let c = self.from_dynkin(labels);
        c.iter().all(|x| x.is_integer()).then(|| Weight(c.iter().map(|x| i64::try_from(x.to_integer()).unwrap()).collect()))
    }

    pub fn is_dominant(&self, mu: &Weight) -> bool {
        self.dynkin_labels(mu).iter().all(|&x| x >= 0)
    }

    pub fn simple_root(&self, i: usize) -> Weight {
        Weight::simple(self.rank, i)
    }

    /// Dynkin labels of `α_i` (column `i` of the Cartan matrix read as `a_ji`).
    pub fn simple_root_labels(&self, i: usize) -> Vec<i64> {
        (0..self.rank).map(|j| self.cartan[j][i]).collect()
    }

    pub fn is_short(&self, alpha: &Weight) -> bool {
        self.form(alpha, alpha) == 2
    }

    /// Dual Coxeter number, computed as `(θ, θ + 2ρ) / (θ, θ)`.
    pub fn dual_coxeter(&self) -> i64 {
        let th: Vec<Rational> = self.max_root.0.iter().map(|&x| int(x)).collect();
        let two_rho_plus: Vec<Rational> = th.iter().zip(&self.rho).map(|(a, r)| a + r * int(2)).collect();
        let v = self.form_q(&th, &two_rho_plus) / self.form_q(&th, &th);
        assert!(v.is_integer());
        i64::try_from(v.to_integer()).unwrap()
    }

    /// `2ρ` in simple-root coordinates (integral).
    pub fn two_rho(&self) -> Weight {
        Weight(self.rho.iter().map(|x| i64::try_from((x * int(2)).to_integer()).unwrap()).collect())
    }

    /// `c_μ = (μ, μ + 2ρ)` for root-lattice weights.
    pub fn casimir(&self, mu: &Weight) -> i64 {
        self.form(mu, &mu.add(&self.two_rho()))
    }

    /// Verify the structural invariants; used by tests and at construction in debug builds.
    pub fn check(&self) -> Result<()> {
        for i in 0..self.rank {
            for j in 0..self.rank {
                if self.d[i] * self.cartan[i][j] != self.d[j] * self.cartan[j][i] {
                    return Err(Error::Check("d_i a_ij not symmetric".into()));
                }
            }
        }
        let min = self.positive_roots.iter().map(|r| self.form(r, r)).min().unwrap();
        if min != 2 {
            return Err(Error::Check(format!("short roots have square length {min}")));
        }
        let top: Vec<&Weight> = self
            .positive_roots
            .iter()
            .filter(|r| (0..self.rank).all(|i| !self.positive_roots.contains(&r.add(&self.simple_root(i)))))
            .collect();
        if top.len() != 1 || *top[0] != self.max_root {
            return Err(Error::Check("highest root not unique".into()));
        }
        Ok(())
    }
}

fn invert_int(a: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<Rational> = r.iter().map(|&x| int(x)).collect();
            row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero()).expect("Cartan matrix invertible");
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                let pivot = m[c].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}
