//! Costed arithmetic against a separate sign-magnitude limb implementation.

use gpr_core::ledger::{CostLedger, CostModel};
use gpr_core::rng::InstanceRng;
use gpr_core::Int;
use num_bigint::BigInt;
use proptest::prelude::*;

/// Little-endian base-2^32 magnitude with a sign flag; zero is never negative.
#[derive(Clone, Debug, PartialEq)]
struct Limbs {
    neg: bool,
    mag: Vec<u32>,
}

impl Limbs {
    fn norm(mut self) -> Self {
        while self.mag.last() == Some(&0) {
            self.mag.pop();
        }
        if self.mag.is_empty() {
            self.neg = false;
        }
        self
    }

    fn to_hex(&self) -> String {
        if self.mag.is_empty() {
            return "0".into();
        }
        let mut s = format!("{:x}", self.mag.last().unwrap());
        for l in self.mag.iter().rev().skip(1) {
            s.push_str(&format!("{l:08x}"));
        }
        if self.neg {
            format!("-{s}")
        } else {
            s
        }
    }

    fn to_int(&self) -> Int {
        Int::from(BigInt::parse_bytes(self.to_hex().as_bytes(), 16).unwrap())
    }
}

fn cmp_mag(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

fn add_mag(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len().max(b.len()) + 1);
    let mut carry = 0u64;
    for i in 0..a.len().max(b.len()) {
        let s = *a.get(i).unwrap_or(&0) as u64 + *b.get(i).unwrap_or(&0) as u64 + carry;
        out.push(s as u32);
        carry = s >> 32;
    }
    out.push(carry as u32);
    out
}

/// `a - b` for `|a| >= |b|`.
fn sub_mag(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len());
    let mut borrow = 0i64;
    for i in 0..a.len() {
        let mut d = a[i] as i64 - *b.get(i).unwrap_or(&0) as i64 - borrow;
        borrow = 0;
        if d < 0 {
            d += 1 << 32;
            borrow = 1;
        }
        out.push(d as u32);
    }
    out
}

fn add(x: &Limbs, y: &Limbs) -> Limbs {
    if x.neg == y.neg {
        return Limbs { neg: x.neg, mag: add_mag(&x.mag, &y.mag) }.norm();
    }
    match cmp_mag(&x.mag, &y.mag) {
        std::cmp::Ordering::Less => Limbs { neg: y.neg, mag: sub_mag(&y.mag, &x.mag) }.norm(),
        _ => Limbs { neg: x.neg, mag: sub_mag(&x.mag, &y.mag) }.norm(),
    }
}

fn mul(x: &Limbs, y: &Limbs) -> Limbs {
    let mut out = vec![0u64; x.mag.len() + y.mag.len() + 1];
    for (i, &a) in x.mag.iter().enumerate() {
        let mut carry = 0u64;
        for (j, &b) in y.mag.iter().enumerate() {
            let t = out[i + j] + a as u64 * b as u64 + carry;
            out[i + j] = t & 0xffff_ffff;
            carry = t >> 32;
        }
        let mut k = i + y.mag.len();
        while carry > 0 {
            let t = out[k] + carry;
            out[k] = t & 0xffff_ffff;
            carry = t >> 32;
            k += 1;
        }
    }
    Limbs {
        neg: x.neg != y.neg,
        mag: out.into_iter().map(|v| v as u32).collect(),
    }
    .norm()
}

fn shl(x: &Limbs, k: u32) -> Limbs {
    let (words, bits) = ((k / 32) as usize, k % 32);
    let mut mag = vec![0u32; words];
    let mut carry = 0u32;
    for &l in &x.mag {
        mag.push((l << bits) | carry);
        carry = if bits == 0 { 0 } else { l >> (32 - bits) };
    }
    mag.push(carry);
    Limbs { neg: x.neg, mag }.norm()
}

fn random_limbs(rng: &mut InstanceRng, max_bits: u64) -> Limbs {
    let bits = 1 + rng.below(max_bits) as u32;
    let mut mag: Vec<u32> = (0..bits.div_ceil(32)).map(|_| rng.next_u64() as u32).collect();
    let top = bits % 32;
    if top != 0 {
        *mag.last_mut().unwrap() &= (1u32 << top) - 1;
    }
    Limbs { neg: rng.below(2) == 1, mag }.norm()
}

#[test]
fn ten_thousand_pairs_up_to_256_bits() {
    let mut rng = InstanceRng::new(0x5eed);
    let mut ledger = CostLedger::uniform_bit();
    for _ in 0..10_000 {
        let (x, y) = (random_limbs(&mut rng, 256), random_limbs(&mut rng, 256));
        let (xi, yi) = (x.to_int(), y.to_int());
        assert_eq!(ledger.add(&xi, &yi), add(&x, &y).to_int(), "{x:?} + {y:?}");
        let neg_y = Limbs { neg: !y.neg, mag: y.mag.clone() }.norm();
        assert_eq!(ledger.sub(&xi, &yi), add(&x, &neg_y).to_int());
        assert_eq!(ledger.mul(&xi, &yi), mul(&x, &y).to_int(), "{x:?} * {y:?}");
        let k = rng.below(100) as u32;
        let up = shl(&x, k).to_int();
        assert_eq!(ledger.shift(&xi, k as i64).unwrap(), up);
        assert_eq!(ledger.shift(&up, -(k as i64)).unwrap(), xi);
    }
}

/// Evaluates a fixed expression shape over the inputs, returning every intermediate.
fn eval_program(vals: &[Int], ledger: &mut CostLedger) -> Vec<Int> {
    let mut out = Vec::new();
    for w in vals.windows(2) {
        let s = ledger.add(&w[0], &w[1]);
        let p = ledger.mul(&s, &w[0]);
        let d = ledger.sub(&p, &w[1]);
        let sh = ledger.shift(&d, 7).unwrap();
        let back = ledger.shift(&sh, -7).unwrap();
        out.extend([s, p, d, sh, back]);
    }
    out
}

proptest! {
    #[test]
    fn values_do_not_depend_on_the_model(xs in proptest::collection::vec(any::<i64>(), 2..12), w in 8u32..200) {
        let vals: Vec<Int> = xs.iter().map(|&x| Int::from(x)).collect();
        let mut bit = CostLedger::new(CostModel::UniformBit);
        let mut word = CostLedger::new(CostModel::WordRam { w });
        prop_assert_eq!(eval_program(&vals, &mut bit), eval_program(&vals, &mut word));
        prop_assert_eq!(bit.bit_adds(), word.bit_adds());
        prop_assert_eq!(bit.bit_mults(), word.bit_mults());
        prop_assert_eq!(bit.word_ops(), 0);
        prop_assert!(word.word_ops() > 0);
    }

    #[test]
    fn concatenated_runs_sum_their_costs(xs in proptest::collection::vec(any::<i64>(), 2..8), ys in proptest::collection::vec(any::<i64>(), 2..8)) {
        let a: Vec<Int> = xs.iter().map(|&x| Int::from(x)).collect();
        let b: Vec<Int> = ys.iter().map(|&x| Int::from(x)).collect();
        let model = CostModel::WordRam { w: 64 };
        let (mut la, mut lb, mut both) = (CostLedger::new(model), CostLedger::new(model), CostLedger::new(model));
        eval_program(&a, &mut la);
        eval_program(&b, &mut lb);
        eval_program(&a, &mut both);
        let mid = both.snapshot();
        eval_program(&b, &mut both);
        let end = both.snapshot();
        prop_assert!(end.bit_adds >= mid.bit_adds && end.bit_mults >= mid.bit_mults && end.word_ops >= mid.word_ops);
        prop_assert_eq!(end.bit_adds, la.bit_adds() + lb.bit_adds());
        prop_assert_eq!(end.bit_mults, la.bit_mults() + lb.bit_mults());
        prop_assert_eq!(end.bit_shifts, la.bit_shifts() + lb.bit_shifts());
        prop_assert_eq!(end.word_ops, la.word_ops() + lb.word_ops());
        let mut merged = la.clone();
        merged.merge(&lb);
        prop_assert_eq!(merged.snapshot(), end);
    }
}
