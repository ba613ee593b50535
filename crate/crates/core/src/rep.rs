//! Partitions, the Weyl dimension formula and a bounded enumeration of
//! PU(d) irreps certifying that the adjoint is the only nontrivial one of
//! degree at most d² − 1.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::CheckReport;

/// Weakly decreasing row lengths with zeros stripped; empty is the trivial irrep.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter(format!("partition {parts:?} is not weakly decreasing")));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition { parts })
    }

    pub fn trivial() -> Self {
        Partition::default()
    }

    /// Diagram with columns of the given heights, `[m₁, m₂, …]^C`.
    pub fn from_columns(columns: &[u32]) -> Result<Self> {
        Ok(Partition::new(columns.to_vec())?.conjugate())
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    pub fn is_trivial(&self) -> bool {
        self.parts.is_empty()
    }

    /// Young-diagram transpose.
    pub fn conjugate(&self) -> Self {
        let width = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=width).map(|c| self.parts.iter().filter(|&&p| p >= c).count() as u32).collect();
        Partition { parts }
    }

    /// Column heights.
    pub fn columns(&self) -> Vec<u32> {
        self.conjugate().parts
    }

    /// Contragredient `[λ₁ − λ_d, …, λ₁ − λ₂, 0]`.
    pub fn dual(&self, d: usize) -> Result<Self> {
        let rows = self.padded(d)?;
        let top = rows[0];
        Partition::new((0..d).map(|i| top - rows[d - 1 - i]).collect())
    }

    /// Row lengths padded with zeros to length `d`.
    pub fn padded(&self, d: usize) -> Result<Vec<u32>> {
        if self.parts.len() > d {
            return Err(Error::TooManyParts { parts: self.parts.len(), d });
        }
        let mut rows = self.parts.clone();
        rows.resize(d, 0);
        Ok(rows)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", rows.join(","))
    }
}

fn weyl_factors(rows: &[u32]) -> Vec<(u64, u64)> {
    let d = rows.len();
    let mut out = Vec::with_capacity(d * (d - 1) / 2);
    for i in 0..d {
        for j in (i + 1)..d {
            out.push(((rows[i] - rows[j]) as u64 + (j - i) as u64, (j - i) as u64));
        }
    }
    out
}

fn weyl_u128(factors: &[(u64, u64)]) -> Option<(u128, u128)> {
    let (mut num, mut den) = (1u128, 1u128);
    for &(a, b) in factors {
        num = num.checked_mul(a as u128)?;
        den = den.checked_mul(b as u128)?;
        let g = num.gcd(&den);
        num /= g;
        den /= g;
    }
    Some((num, den))
}

fn weyl_big(factors: &[(u64, u64)]) -> Result<(u128, u128)> {
    let mut num = BigUint::from(1u8);
    let mut den = BigUint::from(1u8);
    for &(a, b) in factors {
        num *= a;
        den *= b;
    }
    let g = num.gcd(&den);
    let num = u128::try_from(num / &g).map_err(|_| Error::Overflow)?;
    let den = u128::try_from(den / g).map_err(|_| Error::Overflow)?;
    Ok((num, den))
}

/// `D_λ = ∏_{i<j} (λ_i − λ_j + j − i)/(j − i)` in exact integer arithmetic.
pub fn weyl_dimension(p: &Partition, d: usize) -> Result<u128> {
    let rows = p.padded(d)?;
    let factors = weyl_factors(&rows);
    let (num, den) = match weyl_u128(&factors) {
        Some(x) => x,
        None => weyl_big(&factors)?,
    };
    if den != 1 {
        return Err(Error::Precondition(format!("non-integral dimension {num}/{den} for {p}")));
    }
    Ok(num)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct IrrepRecord {
    pub partition: Partition,
    pub dimension: u128,
    pub box_sum: u64,
    /// `Σλ ≡ 0 mod d`.
    pub pu_compatible: bool,
}

impl IrrepRecord {
    pub fn new(partition: Partition, d: usize) -> Result<Self> {
        let dimension = weyl_dimension(&partition, d)?;
        let box_sum = partition.size();
        Ok(IrrepRecord { partition, dimension, box_sum, pu_compatible: box_sum % d as u64 == 0 })
    }
}

/// Every partition with at most `d − 1` rows and `D_λ ≤ bound`, sorted by
/// (dimension, partition). Depth-first over column heights `m₁ ≥ m₂ ≥ …`,
/// pruning once the dimension exceeds the bound.
pub fn enumerate_small_irreps(d: usize, bound: u128) -> Result<Vec<IrrepRecord>> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let mut out = vec![IrrepRecord::new(Partition::trivial(), d)?];
    let mut cols = Vec::new();
    search(d, bound, (d - 1) as u32, &mut cols, &mut out)?;
    out.sort_by(|a, b| a.dimension.cmp(&b.dimension).then_with(|| a.partition.cmp(&b.partition)));
    Ok(out)
}

fn search(d: usize, bound: u128, max_height: u32, cols: &mut Vec<u32>, out: &mut Vec<IrrepRecord>) -> Result<()> {
    for m in (1..=max_height).rev() {
        cols.push(m);
        let rec = IrrepRecord::new(Partition::from_columns(cols)?, d)?;
        if rec.dimension <= bound {
            out.push(rec);
            search(d, bound, m, cols, out)?;
        }
        cols.pop();
    }
    Ok(())
}

/// Unpruned oracle: every partition with at most `d − 1` rows and at most
/// `max_boxes` boxes, filtered by `D_λ ≤ bound`.
pub fn brute_force_small_irreps(d: usize, bound: u128, max_boxes: u32) -> Result<Vec<IrrepRecord>> {
    let mut out = Vec::new();
    let mut rows = Vec::new();
    fn rec(
        d: usize,
        bound: u128,
        left: u32,
        max_part: u32,
        rows: &mut Vec<u32>,
        out: &mut Vec<IrrepRecord>,
    ) -> Result<()> {
        let r = IrrepRecord::new(Partition::new(rows.clone())?, d)?;
        if r.dimension <= bound {
            out.push(r);
        }
        if rows.len() + 1 >= d {
            return Ok(());
        }
        for p in 1..=max_part.min(left) {
            rows.push(p);
            rec(d, bound, left - p, p, rows, out)?;
            rows.pop();
        }
        Ok(())
    }
    rec(d, bound, max_boxes, max_boxes, &mut rows, &mut out)?;
    out.sort_by(|a, b| a.dimension.cmp(&b.dimension).then_with(|| a.partition.cmp(&b.partition)));
    Ok(out)
}

/// Adjoint `[d − 1, 1]^C`.
pub fn adjoint_partition(d: usize) -> Result<Partition> {
    Partition::from_columns(&[(d - 1) as u32, 1])
}

/// One-column heights `m` with `C(d, m) ≤ d² − 1`.
pub fn one_column_survivors(d: usize) -> Result<Vec<u32>> {
    let bound = (d * d - 1) as u128;
    let mut out = Vec::new();
    for m in 1..d as u32 {
        if weyl_dimension(&Partition::from_columns(&[m])?, d)? <= bound {
            out.push(m);
        }
    }
    Ok(out)
}

pub fn certify_adjoint_uniqueness(d: usize) -> Result<CheckReport> {
    let bound = (d * d - 1) as u128;
    let all = enumerate_small_irreps(d, bound)?;
    let mut r = CheckReport::new("adjoint_uniqueness");
    let adjoint = adjoint_partition(d)?;
    let adjoint_dim = weyl_dimension(&adjoint, d)?;
    r.value("adjoint_dimension", adjoint_dim as f64);
    r.value("enumerated", all.len() as f64);
    let ok_dim = r.verdict("adjoint_dimension_is_d2_minus_1", adjoint_dim == bound);
    let found: BTreeSet<Partition> = all.iter().filter(|x| x.pu_compatible).map(|x| x.partition.clone()).collect();
    let want: BTreeSet<Partition> = [Partition::trivial(), adjoint.clone()].into_iter().collect();
    let ok_set = r.verdict("pu_compatible_is_trivial_and_adjoint", found == want);
    r.value("pu_compatible", found.len() as f64);
    let mut ok_dual = true;
    for x in &all {
        let dual = x.partition.dual(d)?;
        ok_dual &= weyl_dimension(&dual, d)? == x.dimension && dual.dual(d)? == x.partition;
    }
    r.verdict("dual_invariant", ok_dual);
    let three = weyl_dimension(&Partition::from_columns(&[1, 1, 1])?, d)?;
    let d128 = d as u128;
    let ok_three = r.verdict(
        "three_column_exceeds_bound",
        three == d128 * (d128 + 1) * (d128 + 2) / 6 && three > bound,
    );
    let survivors = one_column_survivors(d)?;
    r.note(format!("one-column survivors m = {survivors:?}"));
    if d == 2 {
        r.note("d = 2: the two-column candidates [1,1]^C and [d-1,1]^C coincide with the adjoint [2]");
    }
    if !ok_set {
        let extra: Vec<String> = found.difference(&want).map(|p| p.to_string()).collect();
        r.note(format!("unexpected PU(d) irreps: {}", extra.join(" ")));
    }
    Ok(r.finish(ok_dim && ok_set && ok_dual && ok_three))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(weyl_dimension(&p(&[2, 1, 0]), 3).unwrap(), 8);
        assert_eq!(weyl_dimension(&p(&[1, 0, 0]), 3).unwrap(), 3);
        assert_eq!(weyl_dimension(&Partition::from_columns(&[2]).unwrap(), 4).unwrap(), 6);
        assert_eq!(weyl_dimension(&Partition::trivial(), 5).unwrap(), 1);
        assert!(matches!(weyl_dimension(&p(&[1, 1, 1]), 2), Err(Error::TooManyParts { .. })));
    }

    #[test]
    fn large_partition_widens() {
        let rows: Vec<u32> = (0..40).rev().map(|i| 1000 * i).collect();
        let big = weyl_dimension(&p(&rows), 40);
        assert!(matches!(big, Err(Error::Overflow)));
        let rows: Vec<u32> = (0..8).rev().map(|i| 5 * i).collect();
        let factors = weyl_factors(&rows);
        assert_eq!(weyl_u128(&factors).unwrap(), weyl_big(&factors).unwrap());
    }

    #[test]
    fn conjugate_and_dual() {
        assert_eq!(p(&[2, 1]).conjugate(), p(&[2, 1]));
        assert_eq!(p(&[3]).conjugate(), p(&[1, 1, 1]));
        assert_eq!(p(&[2, 1, 0]).dual(3).unwrap(), p(&[2, 1]));
        assert_eq!(p(&[1]).dual(3).unwrap(), p(&[1, 1]));
        assert_eq!(adjoint_partition(4).unwrap(), p(&[2, 1, 1]));
        assert!(Partition::new(vec![1, 2]).is_err());
    }

    #[test]
    fn enumeration_examples() {
        let pu: Vec<_> =
            enumerate_small_irreps(3, 8).unwrap().into_iter().filter(|x| x.pu_compatible).map(|x| x.partition).collect();
        assert_eq!(pu, vec![Partition::trivial(), p(&[2, 1])]);
        let all8 = enumerate_small_irreps(8, 63).unwrap();
        for m in 1..8u32 {
            let present = all8.iter().any(|x| x.partition == Partition::from_columns(&[m]).unwrap());
            assert_eq!(present, m != 4);
        }
        let two: Vec<_> = enumerate_small_irreps(2, 3).unwrap().into_iter().map(|x| x.partition).collect();
        assert_eq!(two, vec![Partition::trivial(), p(&[1]), p(&[2])]);
        assert_eq!(one_column_survivors(9).unwrap(), vec![1, 2, 7, 8]);
    }

    #[test]
    fn certifies_through_ten() {
        for d in 2..=10 {
            let r = certify_adjoint_uniqueness(d).unwrap();
            assert!(r.pass, "d = {d}: {r:?}");
        }
    }

    #[test]
    fn pruned_search_matches_brute_force() {
        for d in 2..=5 {
            let bound = (d * d - 1) as u128;
            assert_eq!(enumerate_small_irreps(d, bound).unwrap(), brute_force_small_irreps(d, bound, 12).unwrap());
        }
    }
}
