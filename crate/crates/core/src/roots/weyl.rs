//! Weyl-group computations on Dynkin labels: dimensions, dominant characters
//! (Freudenthal) and tensor product decomposition (Klimyk).

use super::datum::{RootDatum, Weight};
use crate::error::{Error, Result};
use crate::scalar::{int, Rational};
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

pub type Labels = Vec<i64>;

impl RootDatum {
    /// `(λ, α)` for λ in Dynkin labels and α a root-lattice weight; `(ω_i, α_k) = d_k δ_ik`.
    pub fn pair_labels_root(&self, lam: &[i64], alpha: &Weight) -> i64 {
        (0..self.rank).map(|k| alpha.0[k] * self.d[k] * lam[k]).sum()
    }

    /// Gram matrix `(ω_i, ω_j)`.
    fn omega_gram(&self) -> Vec<Vec<Rational>> {
        (0..self.rank)
            .map(|i| (0..self.rank).map(|j| self.form_q(&self.fundamental_weights[i], &self.fundamental_weights[j])).collect())
            .collect()
    }

    pub fn form_labels(&self, a: &[i64], b: &[i64]) -> Rational {
        let g = self.omega_gram();
        let mut s = Rational::zero();
        for i in 0..self.rank {
            for j in 0..self.rank {
                s += &g[i][j] * int(a[i] * b[j]);
            }
        }
        s
    }

    pub fn root_labels(&self, alpha: &Weight) -> Labels {
        self.dynkin_labels(alpha)
    }

    /// Simple reflection on Dynkin labels: `s_i λ = λ - ⟨λ, α_i^∨⟩ α_i`.
    pub fn reflect(&self, lam: &[i64], i: usize) -> Labels {
        let c = lam[i];
        (0..self.rank).map(|j| lam[j] - c * self.cartan[j][i]).collect()
    }

    /// Dominant conjugate and the parity of the reflections used.
    pub fn dominant_conjugate(&self, lam: &[i64]) -> (Labels, bool) {
        let mut v = lam.to_vec();
        let mut odd = false;
        while let Some(i) = (0..self.rank).find(|&i| v[i] < 0) {
            v = self.reflect(&v, i);
            odd = !odd;
        }
        (v, odd)
    }

    pub fn weyl_orbit(&self, lam: &[i64]) -> Vec<Labels> {
        let mut seen: HashSet<Labels> = HashSet::new();
        let mut q = VecDeque::new();
        seen.insert(lam.to_vec());
        q.push_back(lam.to_vec());
        while let Some(v) = q.pop_front() {
            for i in 0..self.rank {
                let w = self.reflect(&v, i);
                if seen.insert(w.clone()) {
                    q.push_back(w);
                }
            }
        }
        let mut out: Vec<Labels> = seen.into_iter().collect();
        out.sort();
        out
    }

    /// Weyl dimension formula on Dynkin labels.
    pub fn weyl_dim_labels(&self, lam: &[i64]) -> Result<u64> {
        if lam.iter().any(|&x| x < 0) {
            return Err(Error::NotDominant(lam.to_vec()));
        }
        let rho = vec![1; self.rank];
        let lr: Labels = lam.iter().map(|x| x + 1).collect();
        let mut num = Rational::from_integer(1.into());
        for a in &self.positive_roots {
            num *= Rational::new(self.pair_labels_root(&lr, a).into(), self.pair_labels_root(&rho, a).into());
        }
        assert!(num.is_integer());
        Ok(u64::try_from(num.to_integer()).unwrap())
    }

    pub fn weyl_dim(&self, lam: &Weight) -> Result<u64> {
        if !self.is_dominant(lam) {
            return Err(Error::NotDominant(lam.0.clone()));
        }
        self.weyl_dim_labels(&self.dynkin_labels(lam))
    }

    /// Multiplicities of the dominant weights of `V_λ` by Freudenthal's formula.
    pub fn dominant_character(&self, lam: &[i64]) -> Result<BTreeMap<Labels, u64>> {
        if lam.iter().any(|&x| x < 0) {
            return Err(Error::NotDominant(lam.to_vec()));
        }
        let roots: Vec<Labels> = self.positive_roots.iter().map(|a| self.root_labels(a)).collect();
        let mut dominant: Vec<Labels> = vec![lam.to_vec()];
        let mut seen: HashSet<Labels> = dominant.iter().cloned().collect();
        let mut k = 0;
        while k < dominant.len() {
            let mu = dominant[k].clone();
            for a in &roots {
                let nu: Labels = mu.iter().zip(a).map(|(x, y)| x - y).collect();
                if nu.iter().all(|&x| x >= 0) && seen.insert(nu.clone()) {
                    dominant.push(nu);
                }
            }
            k += 1;
        }
        // depth below λ orders the recursion
        let depth = |mu: &Labels| -> Rational {
            let diff: Labels = lam.iter().zip(mu).map(|(a, b)| a - b).collect();
            self.from_dynkin(&diff).into_iter().sum()
        };
        dominant.sort_by_key(|m| depth(m));
        let rho = vec![1i64; self.rank];
        let shift = |m: &[i64]| -> Labels { m.iter().zip(&rho).map(|(a, b)| a + b).collect() };
        let lr = shift(lam);
        let top = self.form_labels(&lr, &lr);
        let mut mult: HashMap<Labels, u64> = HashMap::new();
        mult.insert(lam.to_vec(), 1);
        for mu in dominant.iter().skip(1) {
            let mut acc = Rational::zero();
            for (a, al) in self.positive_roots.iter().zip(&roots) {
                let mut k = 1i64;
                loop {
                    let nu: Labels = mu.iter().zip(al).map(|(x, y)| x + k * y).collect();
                    let (dom, _) = self.dominant_conjugate(&nu);
                    if !seen.contains(&dom) {
                        break;
                    }
                    let m = *mult.get(&dom).unwrap_or(&0);
                    acc += int(m as i64 * self.pair_labels_root(&nu, a));
                    k += 1;
                }
            }
            let mr = shift(mu);
            let den = &top - self.form_labels(&mr, &mr);
            let m = acc * int(2) / den;
            assert!(m.is_integer() && !m.is_negative());
            mult.insert(mu.clone(), u64::try_from(m.to_integer()).unwrap());
        }
        Ok(dominant.into_iter().filter_map(|d| {
            let m = mult[&d];
            (m > 0).then_some((d, m))
        }).collect())
    }

    /// Full formal character of `V_λ`: weight (Dynkin labels) to multiplicity.
    pub fn character(&self, lam: &[i64]) -> Result<BTreeMap<Labels, u64>> {
        let mut out = BTreeMap::new();
        for (mu, m) in self.dominant_character(lam)? {
            for w in self.weyl_orbit(&mu) {
                out.insert(w, m);
            }
        }
        Ok(out)
    }

    /// Weight multiplicities of `V_λ` keyed by root-lattice weight.
    pub fn weight_multiplicities(&self, lam: &Weight) -> Result<BTreeMap<Weight, u64>> {
        if !self.is_dominant(lam) {
            return Err(Error::NotDominant(lam.0.clone()));
        }
        let ch = self.character(&self.dynkin_labels(lam))?;
        Ok(ch
            .into_iter()
            .map(|(l, m)| (self.root_lattice_weight(&l).expect("root-lattice coset is preserved"), m))
            .collect())
    }

    /// `V_λ ⊗ V_μ` by Klimyk's formula, labels to multiplicities.
    pub fn tensor_decompose_labels(&self, lam: &[i64], mu: &[i64]) -> Result<BTreeMap<Labels, u64>> {
        if lam.iter().any(|&x| x < 0) {
            return Err(Error::NotDominant(lam.to_vec()));
        }
        let ch = self.character(mu)?;
        let mut acc: BTreeMap<Labels, i64> = BTreeMap::new();
        for (nu, m) in ch {
            let shifted: Labels = lam.iter().zip(&nu).map(|(a, b)| a + b + 1).collect();
            let (dom, odd) = self.dominant_conjugate(&shifted);
            if dom.contains(&0) {
                continue;
            }
            let w: Labels = dom.iter().map(|x| x - 1).collect();
            *acc.entry(w).or_insert(0) += if odd { -(m as i64) } else { m as i64 };
        }
        let mut out = BTreeMap::new();
        for (w, m) in acc {
            assert!(m >= 0, "negative Klimyk multiplicity");
            if m > 0 {
                out.insert(w, m as u64);
            }
        }
        Ok(out)
    }

    /// Decomposition of `V_λ ⊗ V_μ` for root-lattice weights, highest first.
    pub fn tensor_decompose(&self, lam: &Weight, mu: &Weight) -> Result<Vec<(Weight, u64)>> {
        for w in [lam, mu] {
            if !self.is_dominant(w) {
                return Err(Error::NotDominant(w.0.clone()));
            }
        }
        let d = self.tensor_decompose_labels(&self.dynkin_labels(lam), &self.dynkin_labels(mu))?;
        let mut out: Vec<(Weight, u64)> =
            d.into_iter().map(|(l, m)| (self.root_lattice_weight(&l).expect("root lattice"), m)).collect();
        out.sort_by(|a, b| (b.0.height(), &b.0).cmp(&(a.0.height(), &a.0)));
        Ok(out)
    }

    /// Multiplicities of irreducibles in `V^{⊗d}` for `V = V_λ`; `d = 0` gives the trivial module.
    pub fn tensor_power(&self, lam: &[i64], d: usize) -> Result<BTreeMap<Labels, u64>> {
        let mut cur: BTreeMap<Labels, u64> = BTreeMap::new();
        cur.insert(vec![0; self.rank], 1);
        for _ in 0..d {
            let mut next: BTreeMap<Labels, u64> = BTreeMap::new();
            for (w, m) in &cur {
                for (x, k) in self.tensor_decompose_labels(w, lam)? {
                    *next.entry(x).or_insert(0) += m * k;
                }
            }
            cur = next;
        }
        Ok(cur)
    }
}
