//! Point counts and L-polynomials checked against values from an
//! independent implementation (different irreducible modulus, brute-force
//! squares, rational Newton identities).

use motivic::curves::{catalog_curve, reduce_mod, CountOptions, PointCounter};
use motivic::rhythm::Tolerances;
use motivic::suite::lpoly_from_counts;

struct Known {
    curve: &'static str,
    p: u64,
    counts: [u64; 5],
    lpoly: [i64; 11],
}

const KNOWN: &[Known] = &[
    Known {
        curve: "C1",
        p: 7,
        counts: [7, 55, 319, 2463, 16657],
        lpoly: [1, -1, 3, -11, 28, -74, 196, -539, 1029, -2401, 16807],
    },
    Known {
        curve: "C2",
        p: 7,
        counts: [7, 47, 343, 2543, 16647],
        lpoly: [1, -1, -1, 1, 36, -68, 252, 49, -343, -2401, 16807],
    },
    Known {
        curve: "C3",
        p: 7,
        counts: [10, 66, 352, 2390, 17210],
        lpoly: [1, 2, 10, 20, 51, 176, 357, 980, 3430, 4802, 16807],
    },
    Known {
        curve: "C4",
        p: 7,
        counts: [4, 60, 325, 2400, 16459],
        lpoly: [1, -4, 13, -37, 88, -262, 616, -1813, 4459, -9604, 16807],
    },
    Known {
        curve: "C5",
        p: 7,
        counts: [11, 63, 344, 2347, 16701],
        lpoly: [1, 3, 11, 24, 40, 32, 280, 1176, 3773, 7203, 16807],
    },
    Known {
        curve: "C6",
        p: 7,
        counts: [7, 59, 313, 2475, 17027],
        lpoly: [1, -1, 5, -15, 41, -37, 287, -735, 1715, -2401, 16807],
    },
    Known {
        curve: "C1",
        p: 11,
        counts: [12, 138, 1392, 14318, 160872],
        lpoly: [1, 0, 8, 20, -49, 124, -539, 2420, 10648, 0, 161051],
    },
    Known {
        curve: "C2",
        p: 11,
        counts: [17, 129, 1400, 14761, 160967],
        lpoly: [1, 5, 16, 61, 219, 624, 2409, 7381, 21296, 73205, 161051],
    },
    Known {
        curve: "C3",
        p: 11,
        counts: [12, 138, 1368, 14754, 161792],
        lpoly: [1, 0, 8, 12, 60, 244, 660, 1452, 10648, 0, 161051],
    },
    Known {
        curve: "C4",
        p: 11,
        counts: [9, 159, 1305, 14903, 161359],
        lpoly: [1, -3, 23, -69, 350, -940, 3850, -8349, 30613, -43923, 161051],
    },
    Known {
        curve: "C5",
        p: 11,
        counts: [14, 130, 1391, 14506, 160064],
        lpoly: [1, 2, 6, 29, 22, -126, 242, 3509, 7986, 29282, 161051],
    },
    Known {
        curve: "C6",
        p: 11,
        counts: [15, 113, 1257, 14797, 161320],
        lpoly: [1, 3, 0, -34, -43, 182, -473, -4114, 0, 43923, 161051],
    },
];

#[test]
fn counts_match_independent_values() {
    for known in KNOWN {
        let rc = reduce_mod(&catalog_curve(known.curve).unwrap(), known.p).unwrap();
        for k in 1..=5 {
            let n = PointCounter::new(known.p, k, CountOptions::default()).unwrap().count(&rc).unwrap();
            assert_eq!(n, known.counts[k - 1], "{} p={} k={k}", known.curve, known.p);
        }
    }
}

#[test]
fn lpolys_match_independent_values() {
    for known in KNOWN {
        let (l, weil) = lpoly_from_counts(known.p, 5, &known.counts, &Tolerances::default()).unwrap();
        assert_eq!(l.coeffs, known.lpoly, "{} p={}", known.curve, known.p);
        assert!(weil.ok);
    }
}
