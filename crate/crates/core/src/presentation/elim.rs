//! Row echelon form over a fixed column range with a dense scatter accumulator.
//! The pivot of a row is its lowest column; rows are stored with pivot coefficient 1.

use crate::field::Field;
use std::cmp::Reverse;
use std::collections::BinaryHeap;

const NONE: u32 = u32::MAX;

pub struct BlockEchelon<F> {
    pivot_row: Vec<u32>,
    rows: Vec<Vec<(u32, F)>>,
    acc: Vec<F>,
    live: Vec<bool>,
    heap: BinaryHeap<Reverse<u32>>,
}

impl<F: Field> BlockEchelon<F> {
    pub fn new(ncols: usize) -> Self {
        BlockEchelon {
            pivot_row: vec![NONE; ncols],
            rows: Vec::new(),
            acc: vec![F::zero(); ncols],
            live: vec![false; ncols],
            heap: BinaryHeap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = u32> + '_ {
        self.rows.iter().map(|r| r[0].0)
    }

    fn scatter(&mut self, v: &[(u32, F)]) {
        for (c, x) in v {
            let c = *c as usize;
            if self.live[c] {
                self.acc[c] = self.acc[c].add(x);
            } else {
                self.acc[c] = x.clone();
                self.live[c] = true;
                self.heap.push(Reverse(c as u32));
            }
        }
    }

    fn axpy_tail(&mut self, f: &F, idx: usize) {
        let row = std::mem::take(&mut self.rows[idx]);
        for (c, y) in &row[1..] {
            let cu = *c as usize;
            if self.live[cu] {
                self.acc[cu].sub_mul_assign(f, y);
            } else {
                self.acc[cu] = f.mul(y).neg();
                self.live[cu] = true;
                self.heap.push(Reverse(*c));
            }
        }
        self.rows[idx] = row;
    }

    /// Reduce `v`; the result is empty exactly when `v` lies in the row span if `full`,
    /// otherwise reduction stops at the first column without a pivot.
    fn run(&mut self, v: &[(u32, F)], full: bool) -> Vec<(u32, F)> {
        self.scatter(v);
        let mut out = Vec::new();
        while let Some(Reverse(c)) = self.heap.pop() {
            let cu = c as usize;
            self.live[cu] = false;
            let x = std::mem::replace(&mut self.acc[cu], F::zero());
            if x.is_zero() {
                continue;
            }
            let p = self.pivot_row[cu];
            if p != NONE {
                self.axpy_tail(&x, p as usize);
            } else {
                out.push((c, x));
                if !full {
                    while let Some(Reverse(d)) = self.heap.pop() {
                        let du = d as usize;
                        self.live[du] = false;
                        let y = std::mem::replace(&mut self.acc[du], F::zero());
                        if !y.is_zero() {
                            out.push((d, y));
                        }
                    }
                }
            }
        }
        out
    }

    /// Insert; returns the new pivot column when `v` is independent of the stored rows.
    pub fn insert(&mut self, v: &[(u32, F)]) -> Option<u32> {
        let mut r = self.run(v, false);
        if r.is_empty() {
            return None;
        }
        let inv = r[0].1.inv().expect("nonzero lead");
        if !r[0].1.is_one() {
            for e in r.iter_mut() {
                e.1 = e.1.mul(&inv);
            }
        }
        let lead = r[0].0;
        self.pivot_row[lead as usize] = self.rows.len() as u32;
        self.rows.push(r);
        Some(lead)
    }

    /// Remainder of `v` after eliminating every pivot column.
    pub fn reduce(&mut self, v: &[(u32, F)]) -> Vec<(u32, F)> {
        self.run(v, true)
    }
}
