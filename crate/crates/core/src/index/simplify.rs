//! Display-oriented simplification of pure arithmetic index terms.
//!
//! Two passes: literal folding with a few algebraic identities, then a
//! bottom-up search that replaces a subterm by a strictly smaller candidate
//! of a fixed shape (`v+c`, `max(v,w)`, …) when both agree on a fingerprint
//! of valuations. The result is only used for printing; every bound the
//! checker or harness compares is computed from the unsimplified term.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{evaluate, free_vars, IndexTerm, Valuation};
use crate::metrics::{profile, Profile};

use IndexTerm as I;

/// Simplifies `t` for display. Terms with abstract operators are returned
/// after literal folding only.
pub fn simplify(t: &IndexTerm) -> IndexTerm {
    let folded = fold_identities(t);
    if !folded.is_arith() {
        return folded;
    }
    search(&folded)
}

fn fold_identities(t: &IndexTerm) -> IndexTerm {
    let go = fold_identities;
    match t {
        I::Plus(a, b) => {
            let (a, b) = (go(a), go(b));
            match (&a, &b) {
                (I::Nat(0), _) => b,
                (_, I::Nat(0)) => a,
                _ => I::plus(a, b),
            }
        }
        I::Minus(a, b) => {
            let (a, b) = (go(a), go(b));
            match (&a, &b) {
                (_, I::Nat(0)) => a,
                (I::Nat(0), _) => I::Nat(0),
                _ if a == b => I::Nat(0),
                _ => I::minus(a, b),
            }
        }
        I::Times(a, b) => {
            let (a, b) = (go(a), go(b));
            match (&a, &b) {
                (I::Nat(0), _) | (_, I::Nat(0)) => I::Nat(0),
                (I::Nat(1), _) => b,
                (_, I::Nat(1)) => a,
                _ => I::times(a, b),
            }
        }
        I::Max(a, b) => {
            let (a, b) = (go(a), go(b));
            match (&a, &b) {
                (I::Nat(0), _) => b,
                (_, I::Nat(0)) => a,
                _ if a == b => a,
                // max(a, max(a, x)) = max(a, x), and symmetrically.
                (_, I::Max(x, y)) if **x == a || **y == a => b,
                (I::Max(x, y), _) if **x == b || **y == b => a,
                _ => I::max(a, b),
            }
        }
        I::Sum(i, n, b) | I::BigMax(i, n, b) => {
            let (n, b) = (go(n), go(b));
            if n == I::Nat(0) || b == I::Nat(0) {
                return I::Nat(0);
            }
            if matches!(t, I::Sum(..)) {
                I::sum(i, n, b)
            } else {
                I::big_max(i, n, b)
            }
        }
        I::Seq(a, b) => I::seq(go(a), go(b)),
        I::Par(a, b) => I::par(go(a), go(b)),
        I::BoundedSeq(i, n, b) => I::bounded_seq(i, go(n), go(b)),
        I::BoundedPar(i, n, b) => I::bounded_par(i, go(n), go(b)),
        other => other.clone(),
    }
}

/// Sample points on which a term and a candidate must agree.
fn fingerprint_points(vars: &[String]) -> Vec<Valuation> {
    let mut out = Vec::new();
    if vars.len() <= 3 {
        let k = vars.len();
        let mut digits = vec![0u64; k];
        loop {
            out.push(vars.iter().cloned().zip(digits.iter().copied()).collect());
            let mut pos = 0;
            while pos < k {
                digits[pos] += 1;
                if digits[pos] <= 8 {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
            if pos == k {
                break;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let extra = if vars.len() <= 3 { 64 } else { 256 };
    for _ in 0..extra {
        out.push(vars.iter().map(|v| (v.clone(), rng.gen_range(0..=64))).collect());
    }
    out
}

fn values(t: &IndexTerm, points: &[Valuation]) -> Option<Vec<u64>> {
    let p = profile(Profile::Width);
    points.iter().map(|v| evaluate(t, v, p).ok()).collect()
}

fn candidates(vars: &[String], target: &[u64], points: &[Valuation]) -> Vec<IndexTerm> {
    let var = |v: &String| I::Var(v.clone());
    let mut out = vec![I::Nat(target[0])];
    let first = &points[0];
    let offset = |base: u64| target[0].checked_sub(base);
    for v in vars {
        out.push(var(v));
        if let Some(c) = offset(first[v]) {
            out.push(I::Plus(Box::new(var(v)), Box::new(I::Nat(c))));
        }
        if let Some(k) = points.iter().position(|p| p[v] == 1) {
            out.push(I::Times(Box::new(var(v)), Box::new(I::Nat(target[k]))));
        }
        out.push(I::Max(Box::new(var(v)), Box::new(I::Nat(target[0]))));
        if let Some(k) = points.iter().position(|p| p[v] == 0) {
            out.push(I::Minus(Box::new(I::Nat(target[k])), Box::new(var(v))));
        }
        if let Some(k) = points.iter().position(|p| p[v] > 8) {
            if let Some(c) = points[k][v].checked_sub(target[k]) {
                out.push(I::Minus(Box::new(var(v)), Box::new(I::Nat(c))));
            }
        }
    }
    for v in vars {
        for w in vars {
            if v == w {
                continue;
            }
            if v < w {
                out.push(I::Plus(Box::new(var(v)), Box::new(var(w))));
                out.push(I::Times(Box::new(var(v)), Box::new(var(w))));
                out.push(I::Max(Box::new(var(v)), Box::new(var(w))));
                if let Some(c) = offset(first[v] + first[w]) {
                    out.push(I::Plus(
                        Box::new(I::Plus(Box::new(var(v)), Box::new(var(w)))),
                        Box::new(I::Nat(c)),
                    ));
                }
            }
            out.push(I::Minus(Box::new(var(v)), Box::new(var(w))));
            for c in 1..=2 {
                out.push(I::Minus(Box::new(var(v)), Box::new(I::Plus(Box::new(var(w)), Box::new(I::Nat(c))))));
            }
        }
    }
    out
}

fn search(t: &IndexTerm) -> IndexTerm {
    let rebuilt = match t {
        I::Plus(a, b) => I::plus(search(a), search(b)),
        I::Minus(a, b) => I::minus(search(a), search(b)),
        I::Times(a, b) => I::times(search(a), search(b)),
        I::Max(a, b) => I::max(search(a), search(b)),
        I::Sum(i, n, b) => I::sum(i, search(n), search(b)),
        I::BigMax(i, n, b) => I::big_max(i, search(n), search(b)),
        other => return other.clone(),
    };
    let rebuilt = fold_identities(&rebuilt);
    if rebuilt.size() <= 1 {
        return rebuilt;
    }
    let vars: Vec<String> = free_vars(&rebuilt).into_iter().collect();
    let points = fingerprint_points(&vars);
    let Some(target) = values(&rebuilt, &points) else { return rebuilt };
    for cand in candidates(&vars, &target, &points) {
        if cand.size() < rebuilt.size() && values(&cand, &points).as_deref() == Some(&target[..]) {
            return cand;
        }
    }
    rebuilt
}
