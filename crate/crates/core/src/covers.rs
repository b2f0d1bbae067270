//! Counting minimal covers of a finite set, the recursion proposed for
//! them, and ordered set partitions.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::mcb::is_minimal_cover;
use crate::subset::{SetFamily, Subset};

pub const ORACLE_MAX_A: usize = 12;
pub const ORACLE_MAX_B: usize = 4;
pub const ENUM_MAX_E: usize = 8;
pub const ENUM_MAX_B: usize = 3;

/// Unordered covers of `[a]` by `b` nonempty subsets from which no member
/// can be dropped.
///
/// Such a cover has distinct members, so it is counted `b!` times among
/// ordered tuples. An ordered tuple is the same as giving each element the
/// nonempty set of positions containing it, where every position must be
/// the sole owner of some element. That count is a walk over the elements
/// tracking which positions already own one.
pub fn count_minimal_covers_oracle(a: usize, b: usize) -> Result<BigUint> {
    if a == 0 || b == 0 || a > ORACLE_MAX_A || b > ORACLE_MAX_B {
        return Err(Error::Scope(format!(
            "cover oracle needs 1 <= a <= {ORACLE_MAX_A} and 1 <= b <= {ORACLE_MAX_B} (got a={a}, b={b})"
        )));
    }
    let states = 1usize << b;
    let mut ways = vec![BigUint::zero(); states];
    ways[0] = BigUint::one();
    for _ in 0..a {
        let mut next = vec![BigUint::zero(); states];
        for (owned, w) in ways.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            for t in 1..states {
                let to = if t.is_power_of_two() { owned | t } else { owned };
                next[to] += w;
            }
        }
        ways = next;
    }
    Ok(&ways[states - 1] / factorial(b))
}

pub fn factorial(k: usize) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn binomial_big(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Which ground set size the power of two in the recursion refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RecursionExponent {
    /// `2^{a-r}`: subsets of the set being covered.
    SetSize,
    /// `2^{n-r}` for a fixed ambient `n`.
    Ambient(usize),
}

/// `T_{a,1} = 1`, `T_{a,2} = Σ_{m=1}^{a} C(a,m) 2^{a-m}` and, for
/// `b >= 3`, `T_{a,b} = Σ_{r=1}^{a-1} C(a, a-r) 2^{e-r} T_{a-r, b-1}` with
/// `e = a` or the ambient `n`.
pub fn count_covers_recursion(a: usize, b: usize, exponent: RecursionExponent) -> Result<BigUint> {
    if a == 0 || b == 0 {
        return Err(Error::InvalidInput("the recursion needs a >= 1 and b >= 1".into()));
    }
    if let RecursionExponent::Ambient(n) = exponent {
        if n < a {
            return Err(Error::InvalidInput(format!("ambient n = {n} is smaller than a = {a}")));
        }
    }
    Ok(recursion(a, b, exponent))
}

fn recursion(a: usize, b: usize, exponent: RecursionExponent) -> BigUint {
    match b {
        1 => BigUint::one(),
        2 => (1..=a).map(|m| binomial_big(a, m) * pow2(a - m)).sum(),
        _ => (1..a)
            .map(|r| {
                let e = match exponent {
                    RecursionExponent::SetSize => a,
                    RecursionExponent::Ambient(n) => n,
                };
                binomial_big(a, a - r) * pow2(e - r) * recursion(a - r, b - 1, exponent)
            })
            .sum(),
    }
}

fn pow2(k: usize) -> BigUint {
    BigUint::one() << k
}

/// Serializes as a JSON number when it fits in `u64`, else as a decimal
/// string.
pub fn serialize_big<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(x) => s.serialize_u64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

fn serialize_opt_big<S: Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => serialize_big(x, s),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverCount {
    pub a: usize,
    pub b: usize,
    #[serde(rename = "recursion", serialize_with = "serialize_opt_big")]
    pub value_recursion: Option<BigUint>,
    #[serde(rename = "oracle", serialize_with = "serialize_opt_big")]
    pub value_oracle: Option<BigUint>,
    /// Present when both values were computed.
    pub agree: Option<bool>,
}

/// Both counts and their comparison.
pub fn compare_counts(a: usize, b: usize) -> Result<CoverCount> {
    let rec = count_covers_recursion(a, b, RecursionExponent::SetSize)?;
    let oracle = count_minimal_covers_oracle(a, b)?;
    Ok(CoverCount {
        a,
        b,
        agree: Some(rec == oracle),
        value_recursion: Some(rec),
        value_oracle: Some(oracle),
    })
}

/// Stirling number of the second kind by the standard recurrence.
pub fn stirling2(a: usize, r: usize) -> BigUint {
    let mut row = vec![BigUint::zero(); r + 1];
    row[0] = BigUint::one();
    for i in 1..=a {
        for k in (1..=r.min(i)).rev() {
            let prev = row[k - 1].clone();
            row[k] = &row[k] * k + prev;
        }
        row[0] = BigUint::zero();
    }
    row[r].clone()
}

/// Ordered partitions of `[a]` into `r` nonempty blocks, by
/// inclusion-exclusion over surjections: `Σ_j (-1)^j C(r,j) (r-j)^a`.
pub fn count_disjoint_covers(a: usize, r: usize) -> BigUint {
    if r > a {
        return BigUint::zero();
    }
    let mut pos = BigUint::zero();
    let mut neg = BigUint::zero();
    for j in 0..=r {
        let term = binomial_big(r, j) * BigUint::from(r - j).pow(a as u32);
        if j % 2 == 0 {
            pos += term;
        } else {
            neg += term;
        }
    }
    pos - neg
}

/// Ordered partitions of `[a]` into `r` nonempty blocks, listed.
pub fn ordered_partitions(a: usize, r: usize) -> Vec<Vec<Subset>> {
    let mut out = Vec::new();
    if r > a {
        return out;
    }
    let mut blocks = vec![Subset::EMPTY; r];
    place(0, a, &mut blocks, &mut out);
    out
}

fn place(e: usize, a: usize, blocks: &mut Vec<Subset>, out: &mut Vec<Vec<Subset>>) {
    let empty = blocks.iter().filter(|b| b.is_empty()).count();
    if empty > a - e {
        return;
    }
    if e == a {
        out.push(blocks.clone());
        return;
    }
    for i in 0..blocks.len() {
        blocks[i] = blocks[i].with(e);
        place(e + 1, a, blocks, out);
        blocks[i] = blocks[i].without(e);
    }
}

/// Every minimal cover of `[e]` by exactly `b` nonempty subsets, each with
/// members in increasing bit order; covers are listed in lexicographic
/// order of their member tuples.
pub fn enumerate_minimal_covers(e: usize, b: usize) -> Result<Vec<SetFamily>> {
    if e == 0 || b == 0 || e > ENUM_MAX_E || b > ENUM_MAX_B {
        return Err(Error::Scope(format!(
            "cover enumeration needs 1 <= E <= {ENUM_MAX_E} and 1 <= b <= {ENUM_MAX_B} (got E={e}, b={b})"
        )));
    }
    let full = Subset::full(e);
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(b);
    pick(full, b, 1, &mut chosen, &mut out);
    Ok(out
        .into_iter()
        .map(|m| SetFamily::new(e, m).expect("members lie in the ground set"))
        .collect())
}

fn pick(full: Subset, b: usize, start: u32, chosen: &mut Vec<Subset>, out: &mut Vec<Vec<Subset>>) {
    if chosen.len() == b {
        let union = chosen.iter().fold(Subset::EMPTY, |a, s| a.union(*s));
        if union == full && is_minimal_cover(chosen) {
            out.push(chosen.clone());
        }
        return;
    }
    for bits in start..=full.bits() {
        chosen.push(Subset::from_bits(bits));
        pick(full, b, bits + 1, chosen, out);
        chosen.pop();
    }
}
