//! Exhaustive checks of the multipliers against arithmetic oracles that do
//! not share code with the library.

use unaryflow::detmul::{
    build_flip_plan, clockdiv_multiply_exact, downscale, downscale_pair, inv_count, scalable_multiply,
    scalable_multiply_with, MulOptions, Operand,
};
use unaryflow::UnaryValue;

fn v(k: u64, n: u32) -> UnaryValue {
    UnaryValue::new(k, n).unwrap()
}

fn rhu(num: u64, den: u64) -> u64 {
    (2 * num + den) / (2 * den)
}

/// Quotient/remainder split with A keeping ceil(n/2) bits, B floor(n/2).
fn split(a: u64, b: u64, n: u32) -> (u64, u64, u64, u64, u64, u64) {
    let keep_a = n.div_ceil(2);
    let keep_b = n / 2;
    let (sa, sb) = (n - keep_a, n - keep_b);
    let (qa, qb) = (1u64 << keep_a, 1u64 << keep_b);
    (a >> sa, a & ((1 << sa) - 1), b >> sb, b & ((1 << sb) - 1), qa, qb)
}

/// First three terms of the product expansion, each rounded half up.
fn three_term(a: u64, b: u64, n: u32) -> u64 {
    let (ah, al, bh, bl, qa, qb) = split(a, b, n);
    ah * bh + rhu(al * bh, qb) + rhu(bl * ah, qa)
}

fn four_term(a: u64, b: u64, n: u32) -> u64 {
    let (_, al, _, bl, _, _) = split(a, b, n);
    three_term(a, b, n) + rhu(al * bl, 1 << n)
}

fn ideal(a: u64, b: u64, n: u32) -> u64 {
    rhu(a * b, 1 << n)
}

#[test]
fn clockdiv_popcount_is_product() {
    for n in 0..=5 {
        let top = 1u64 << n;
        for a in 0..=top {
            for b in 0..=top {
                let s = clockdiv_multiply_exact(v(a, n), v(b, n)).unwrap();
                assert_eq!(s.len() as u64, top * top);
                assert_eq!(s.popcount(), a * b, "n {n}: {a} x {b}");
            }
        }
    }
}

#[test]
fn scalable_matches_three_term_sum() {
    for n in [2u32, 4, 6] {
        let top = 1u64 << n;
        for a in 0..=top {
            for b in 0..=top {
                let r = scalable_multiply(v(a, n), v(b, n)).unwrap();
                assert_eq!(r.value.numerator(), three_term(a, b, n), "n {n}: {a} x {b}");
                assert_eq!(r.ideal.numerator(), ideal(a, b, n));
            }
        }
    }
}

#[test]
fn odd_resolutions_match_three_term_sum() {
    for n in [3u32, 5, 7] {
        let top = 1u64 << n;
        for a in 0..=top {
            for b in 0..=top {
                let r = scalable_multiply(v(a, n), v(b, n)).unwrap();
                assert_eq!(r.value.numerator(), three_term(a, b, n), "n {n}: {a} x {b}");
            }
        }
    }
}

#[test]
fn fourth_term_oracle_error_at_most_one() {
    for n in [4u32, 6, 8] {
        let top = 1u64 << n;
        let mut max = 0;
        for a in 0..=top {
            for b in 0..=top {
                max = max.max(four_term(a, b, n).abs_diff(ideal(a, b, n)));
            }
        }
        assert!(max <= 1, "n {n}: {max}");
    }
}

#[test]
fn error_bound_even_resolutions() {
    for n in [4u32, 6, 8] {
        let top = 1u64 << n;
        for a in 0..=top {
            for b in 0..=top {
                let r = scalable_multiply(v(a, n), v(b, n)).unwrap();
                assert!(r.error_bits.abs() <= 2, "n {n}: {a} x {b} -> {}", r.error_bits);
                assert_eq!(r.stream.len() as u64, top);
            }
        }
    }
}

#[test]
fn uncompensated_under_approximates() {
    for n in [4u32, 6] {
        let top = 1u64 << n;
        for a in 0..=top {
            for b in 0..=top {
                let r = scalable_multiply_with(v(a, n), v(b, n), MulOptions { compensate: false, ..MulOptions::default() }).unwrap();
                let (ah, _, bh, _, _, _) = split(a, b, n);
                assert_eq!(r.value.numerator(), ah * bh);
                assert!(ah * bh * top <= a * b);
            }
        }
    }
}

#[test]
fn downscale_reconstructs() {
    for n in 0..=10u32 {
        for shift in 0..=n {
            for k in 0..=(1u64 << n) {
                let d = downscale(v(k, n), shift).unwrap();
                assert_eq!(d.quotient.numerator() * (1 << shift) + d.error, k);
                assert_eq!(d.original(), v(k, n));
                assert!(d.error < 1 << shift);
                assert!(d.quotient.cmp_value(v(k, n)).is_le());
            }
        }
    }
}

#[test]
fn inv_count_is_rounded_product() {
    for res in 0..=4u32 {
        let q = 1u64 << res;
        for e in 0..q {
            for k in 0..=q {
                assert_eq!(inv_count(e, v(k, res)).unwrap(), rhu(e * k, q));
            }
        }
    }
}

/// For every pair with q <= 16: flips land on the erroneous bit, the counts
/// are conserved, and exactly `aligned_count` flips sit where the other
/// operand's downscaled bit is 1.
#[test]
fn flip_plans_conserve_counts() {
    for n in [2u32, 4, 6, 8] {
        let top = 1u64 << n;
        for a in 0..=top {
            for b in 0..=top {
                let (da, db) = downscale_pair(v(a, n), v(b, n)).unwrap();
                let qa = 1u64 << da.quotient.resolution_log2();
                let (ah, bh) = (da.quotient.numerator(), db.quotient.numerator());
                let pa = build_flip_plan(&da, &db, Operand::A).unwrap();
                let pb = build_flip_plan(&db, &da, Operand::B).unwrap();

                assert_eq!(pa.flip_cycles.len() as u64 + pa.ceded, da.error);
                assert_eq!(pa.ceded, 0);
                assert!(pa.flip_cycles.iter().all(|t| t % qa == ah));
                let aligned_a = pa.flip_cycles.iter().filter(|t| *t / qa < bh).count() as u64;
                assert_eq!(aligned_a, pa.aligned_count);

                assert_eq!(pb.flip_cycles.len() as u64 + pb.ceded, db.error);
                assert!(pb.flip_cycles.iter().all(|t| t / qa == bh));
                let aligned_b = pb.flip_cycles.iter().filter(|t| *t % qa < ah).count() as u64;
                assert_eq!(aligned_b, pb.aligned_count);

                assert!(pa.flip_cycles.iter().all(|t| pb.flip_cycles.binary_search(t).is_err()));
                if pb.ceded > 0 {
                    assert!(pa.flip_cycles.contains(&(bh * qa + ah)));
                }
            }
        }
    }
}

#[test]
fn products_chain_at_constant_length() {
    let n = 6;
    let mut x = v(50, n);
    for k in [63u64, 40, 64, 17] {
        let r = scalable_multiply(x, v(k, n)).unwrap();
        assert_eq!(r.stream.len(), 64);
        assert_eq!(r.value.resolution_log2(), n);
        x = r.value;
    }
}

#[test]
fn fourth_term_flag_matches_oracle() {
    let opts = MulOptions { fourth_term: true, ..MulOptions::default() };
    for n in [2u32, 4, 6] {
        let top = 1u64 << n;
        for a in 0..=top {
            for b in 0..=top {
                let r = scalable_multiply_with(v(a, n), v(b, n), opts).unwrap();
                assert_eq!(r.value.numerator(), four_term(a, b, n), "n {n}: {a} x {b}");
                assert!(r.error_bits.abs() <= 1);
                assert_eq!(r.stream.len() as u64, top);
            }
        }
    }
}
