//! Metric profiles: a language-level interpretation of `empty`/`wire`/
//! `seq`/`par` paired with a circuit-level interpretation of `id`/`append`/
//! `gate`, plus the ground-truth oracle they are meant to over-approximate.
//!
//! Also hosts the bounded validators for the algebraic laws that make a
//! profile sound (well-behavedness, local coherence, signature soundness).

use std::collections::HashMap;
use std::fmt;

use crate::circuit::{
    oracle_bit_width, oracle_depth, oracle_gatecount, oracle_gatecount_all, oracle_qubit_width, oracle_tcount,
    oracle_width, Circuit, GateDecl, WireType,
};
use crate::index::{evaluate, IndexError, IndexTerm, Valuation, WireMultiset};
use crate::racs::infer_signature;

/// A binary operation on naturals used for sequential or parallel composition.
#[derive(Clone, Copy)]
pub enum Combine {
    Add,
    Max,
    /// An arbitrary operation; it cannot be lowered to arithmetic.
    Custom { name: &'static str, op: fn(u64, u64) -> u64 },
}

impl Combine {
    pub fn apply(&self, a: u64, b: u64) -> u64 {
        match self {
            Combine::Add => a.saturating_add(b),
            Combine::Max => a.max(b),
            Combine::Custom { op, .. } => op(a, b),
        }
    }

    fn lower(&self, a: IndexTerm, b: IndexTerm, profile: &str) -> Result<IndexTerm, IndexError> {
        match self {
            Combine::Add => Ok(IndexTerm::plus(a, b)),
            Combine::Max => Ok(IndexTerm::max(a, b)),
            Combine::Custom { name, .. } => Err(IndexError::Unexpressible(name.to_string(), profile.to_string())),
        }
    }
}

impl fmt::Debug for Combine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Combine::Add => f.write_str("+"),
            Combine::Max => f.write_str("max"),
            Combine::Custom { name, .. } => f.write_str(name),
        }
    }
}

/// Interpretation of the language-level resource operators.
#[derive(Clone, Copy, Debug)]
pub struct Rmi {
    pub empty: u64,
    pub qubit: u64,
    pub bit: u64,
    pub seq: Combine,
    pub par: Combine,
}

impl Rmi {
    pub fn wire(&self, w: WireType) -> u64 {
        match w {
            WireType::Qubit => self.qubit,
            WireType::Bit => self.bit,
        }
    }
}

/// How `append[g](n, l, h, k)` is interpreted: `n` is the size so far,
/// `l` the bystander wires, `h` the consumed and `k` the produced wires.
#[derive(Clone, Copy)]
pub enum AppendInterp {
    Const(u64),
    /// `n + (k + l ∸ n)`: new wires are needed only beyond those already paid for.
    Reuse,
    /// `n + weight(g)`.
    Count(fn(&GateDecl) -> u64),
}

/// How `gate[g,pos](args)` (output annotation of a gate) is interpreted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateInterp {
    Const(u64),
    /// Latest input plus one for counting gates; pass-through otherwise;
    /// zero for operations without inputs.
    Depth,
}

/// Interpretation of the circuit-level operators.
#[derive(Clone, Copy)]
pub struct Cmi {
    pub id_qubit: u64,
    pub id_bit: u64,
    pub append: AppendInterp,
    pub gate: GateInterp,
}

impl Cmi {
    pub fn id(&self, ms: &WireMultiset) -> u64 {
        self.id_qubit * ms.qubits + self.id_bit * ms.bits
    }

    pub fn append(&self, g: &GateDecl, n: u64, beside: u64, _into: u64, outof: u64) -> u64 {
        match self.append {
            AppendInterp::Const(c) => c,
            AppendInterp::Reuse => n.saturating_add(outof.saturating_add(beside).saturating_sub(n)),
            AppendInterp::Count(weight) => n.saturating_add(weight(g)),
        }
    }

    pub fn gate(&self, g: &GateDecl, _pos: usize, inputs: &[u64]) -> u64 {
        match self.gate {
            GateInterp::Const(c) => c,
            GateInterp::Depth => match inputs.iter().max() {
                None => 0,
                Some(&m) if g.counts_as_gate => m + 1,
                Some(&m) => m,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfileKind {
    Global,
    Local,
}

/// Which ground-truth measurement a profile approximates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Oracle {
    Width,
    QubitWidth,
    BitWidth,
    GateCount,
    GateCountAll,
    TCount,
    Depth,
}

impl Oracle {
    /// The global measurement of `c`; for depth, the maximum output depth
    /// with every input at 0.
    pub fn measure(&self, c: &Circuit) -> u64 {
        match self {
            Oracle::Width => oracle_width(c),
            Oracle::QubitWidth => oracle_qubit_width(c),
            Oracle::BitWidth => oracle_bit_width(c),
            Oracle::GateCount => oracle_gatecount(c),
            Oracle::GateCountAll => oracle_gatecount_all(c),
            Oracle::TCount => oracle_tcount(c),
            Oracle::Depth => crate::circuit::oracle_max_depth(c),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Profile {
    Width,
    GateCount,
    GateCountAll,
    TCount,
    Qubits,
    Bits,
    Depth,
}

impl Profile {
    pub const ALL: [Profile; 7] = [
        Profile::Width,
        Profile::GateCount,
        Profile::GateCountAll,
        Profile::TCount,
        Profile::Qubits,
        Profile::Bits,
        Profile::Depth,
    ];

    pub fn name(self) -> &'static str {
        profile(self).name
    }
}

#[derive(Clone, Copy)]
pub struct MetricProfile {
    pub name: &'static str,
    pub kind: ProfileKind,
    pub rmi: Rmi,
    pub cmi: Cmi,
    pub oracle: Oracle,
}

impl fmt::Debug for MetricProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MetricProfile({})", self.name)
    }
}

fn counts_gate(g: &GateDecl) -> u64 {
    g.counts_as_gate as u64
}

fn counts_any(_: &GateDecl) -> u64 {
    1
}

fn counts_t(g: &GateDecl) -> u64 {
    g.is_t as u64
}

const WIDTH_RMI: Rmi = Rmi { empty: 0, qubit: 1, bit: 1, seq: Combine::Max, par: Combine::Add };
const COUNT_RMI: Rmi = Rmi { empty: 0, qubit: 0, bit: 0, seq: Combine::Add, par: Combine::Add };

static PROFILES: [MetricProfile; 7] = [
    MetricProfile {
        name: "width",
        kind: ProfileKind::Global,
        rmi: WIDTH_RMI,
        cmi: Cmi { id_qubit: 1, id_bit: 1, append: AppendInterp::Reuse, gate: GateInterp::Const(0) },
        oracle: Oracle::Width,
    },
    MetricProfile {
        name: "gatecount",
        kind: ProfileKind::Global,
        rmi: COUNT_RMI,
        cmi: Cmi { id_qubit: 0, id_bit: 0, append: AppendInterp::Count(counts_gate), gate: GateInterp::Const(0) },
        oracle: Oracle::GateCount,
    },
    MetricProfile {
        name: "gatecount_all",
        kind: ProfileKind::Global,
        rmi: COUNT_RMI,
        cmi: Cmi { id_qubit: 0, id_bit: 0, append: AppendInterp::Count(counts_any), gate: GateInterp::Const(0) },
        oracle: Oracle::GateCountAll,
    },
    MetricProfile {
        name: "tcount",
        kind: ProfileKind::Global,
        rmi: COUNT_RMI,
        cmi: Cmi { id_qubit: 0, id_bit: 0, append: AppendInterp::Count(counts_t), gate: GateInterp::Const(0) },
        oracle: Oracle::TCount,
    },
    MetricProfile {
        name: "qubits",
        kind: ProfileKind::Global,
        rmi: Rmi { bit: 0, ..WIDTH_RMI },
        cmi: Cmi { id_qubit: 1, id_bit: 0, append: AppendInterp::Reuse, gate: GateInterp::Const(0) },
        oracle: Oracle::QubitWidth,
    },
    MetricProfile {
        name: "bits",
        kind: ProfileKind::Global,
        rmi: Rmi { qubit: 0, ..WIDTH_RMI },
        cmi: Cmi { id_qubit: 0, id_bit: 1, append: AppendInterp::Reuse, gate: GateInterp::Const(0) },
        oracle: Oracle::BitWidth,
    },
    MetricProfile {
        name: "depth",
        kind: ProfileKind::Local,
        rmi: Rmi { empty: 0, qubit: 0, bit: 0, seq: Combine::Max, par: Combine::Max },
        cmi: Cmi { id_qubit: 0, id_bit: 0, append: AppendInterp::Const(0), gate: GateInterp::Depth },
        oracle: Oracle::Depth,
    },
];

pub fn profile(p: Profile) -> &'static MetricProfile {
    &PROFILES[Profile::ALL.iter().position(|q| *q == p).expect("every profile is registered")]
}

pub fn builtin_profiles() -> &'static [MetricProfile] {
    &PROFILES
}

/// Looks a profile up by name (`qubitcount`/`bitcount` are accepted aliases).
pub fn profile_by_name(name: &str) -> Option<&'static MetricProfile> {
    let canonical = match name {
        "qubitcount" => "qubits",
        "bitcount" => "bits",
        other => other,
    };
    PROFILES.iter().find(|p| p.name == canonical)
}

impl MetricProfile {
    pub fn is_local(&self) -> bool {
        self.kind == ProfileKind::Local
    }

    /// Rewrites every abstract operator into arithmetic under this profile.
    pub fn lower(&self, t: &IndexTerm) -> Result<IndexTerm, IndexError> {
        use IndexTerm as I;
        let go = |x: &IndexTerm| self.lower(x);
        let unknown = |g: &str| IndexError::UnknownGate(g.to_string());
        Ok(match t {
            I::Nat(_) | I::Var(_) => t.clone(),
            I::Plus(a, b) => I::plus(go(a)?, go(b)?),
            I::Minus(a, b) => I::minus(go(a)?, go(b)?),
            I::Times(a, b) => I::times(go(a)?, go(b)?),
            I::Max(a, b) => I::max(go(a)?, go(b)?),
            I::Sum(i, n, b) => I::sum(i, go(n)?, go(b)?),
            I::BigMax(i, n, b) => I::big_max(i, go(n)?, go(b)?),
            I::Empty => I::Nat(self.rmi.empty),
            I::Wire(w) => I::Nat(self.rmi.wire(*w)),
            I::Seq(a, b) => self.rmi.seq.lower(go(a)?, go(b)?, self.name)?,
            I::Par(a, b) => self.rmi.par.lower(go(a)?, go(b)?, self.name)?,
            I::BoundedSeq(i, n, b) => self.lower_bounded(&self.rmi.seq, i, go(n)?, go(b)?)?,
            I::BoundedPar(i, n, b) => self.lower_bounded(&self.rmi.par, i, go(n)?, go(b)?)?,
            I::Id(ms) => I::Nat(self.cmi.id(ms)),
            I::Append { gate, global, beside, outof, .. } => {
                let g = crate::circuit::gate_decl(gate).ok_or_else(|| unknown(gate))?;
                match self.cmi.append {
                    AppendInterp::Const(c) => I::Nat(c),
                    AppendInterp::Reuse => {
                        let n = go(global)?;
                        I::plus(n.clone(), I::minus(I::plus(go(outof)?, go(beside)?), n))
                    }
                    AppendInterp::Count(weight) => I::plus(go(global)?, I::Nat(weight(g))),
                }
            }
            I::GateOp { gate, args, .. } => {
                let g = crate::circuit::gate_decl(gate).ok_or_else(|| unknown(gate))?;
                match self.cmi.gate {
                    GateInterp::Const(c) => I::Nat(c),
                    GateInterp::Depth => {
                        let mut lowered = args.iter().map(go).collect::<Result<Vec<_>, _>>()?.into_iter();
                        match lowered.next() {
                            None => I::Nat(0),
                            Some(first) => {
                                let latest = lowered.fold(first, I::max);
                                if g.counts_as_gate {
                                    I::plus(latest, I::Nat(1))
                                } else {
                                    latest
                                }
                            }
                        }
                    }
                }
            }
        })
    }

    fn lower_bounded(&self, op: &Combine, i: &str, n: IndexTerm, body: IndexTerm) -> Result<IndexTerm, IndexError> {
        let e = self.rmi.empty;
        let folded = match op {
            Combine::Add => IndexTerm::sum(i, n, body),
            Combine::Max => IndexTerm::big_max(i, n, body),
            Combine::Custom { name, .. } => {
                return Err(IndexError::Unexpressible(format!("bounded {name}"), self.name.to_string()))
            }
        };
        Ok(if e == 0 { folded } else { op.lower(IndexTerm::Nat(e), folded, self.name)? })
    }
}

/// A failed law, with the naturals that witness the failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub constraint: &'static str,
    pub description: String,
    pub witness: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub subject: String,
    pub constraints: Vec<&'static str>,
    pub violation: Option<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.violation {
            None => write!(f, "{}: pass [{}]", self.subject, self.constraints.join(", ")),
            Some(v) => {
                let w: Vec<String> = v.witness.iter().map(u64::to_string).collect();
                write!(f, "{}: FAIL {} ({}) witness ({})", self.subject, v.constraint, v.description, w.join(","))
            }
        }
    }
}

struct Checker {
    constraints: Vec<&'static str>,
    violation: Option<Violation>,
}

impl Checker {
    fn new() -> Self {
        Checker { constraints: Vec::new(), violation: None }
    }

    /// Runs `body` for a named constraint unless an earlier one already failed.
    fn run(&mut self, id: &'static str, body: impl FnOnce() -> Option<(String, Vec<u64>)>) {
        if self.violation.is_some() {
            return;
        }
        self.constraints.push(id);
        if let Some((description, witness)) = body() {
            self.violation = Some(Violation { constraint: id, description, witness });
        }
    }

    fn finish(self, subject: String) -> ValidationReport {
        ValidationReport { subject, constraints: self.constraints, violation: self.violation }
    }
}

fn first<T>(mut it: impl Iterator<Item = Option<T>>) -> Option<T> {
    it.find_map(|x| x)
}

fn monoid_laws(op: &Combine, e: u64, bound: u64, commutative: bool) -> Option<(String, Vec<u64>)> {
    let r = 0..=bound;
    first(r.clone().map(|x| {
        (op.apply(e, x) != x || op.apply(x, e) != x).then(|| ("identity".to_string(), vec![e, x]))
    }))
    .or_else(|| {
        first(r.clone().flat_map(|x| r.clone().map(move |y| (x, y))).map(|(x, y)| {
            if commutative && op.apply(x, y) != op.apply(y, x) {
                return Some(("commutativity".to_string(), vec![x, y]));
            }
            if x < bound && (op.apply(x, y) > op.apply(x + 1, y) || op.apply(y, x) > op.apply(y, x + 1)) {
                return Some(("monotonicity".to_string(), vec![x, y]));
            }
            None
        }))
    })
    .or_else(|| {
        first(r.clone().flat_map(|x| r.clone().flat_map(move |y| (0..=bound).map(move |z| (x, y, z)))).map(
            |(x, y, z)| {
                (op.apply(op.apply(x, y), z) != op.apply(x, op.apply(y, z)))
                    .then(|| ("associativity".to_string(), vec![x, y, z]))
            },
        ))
    })
}

const WIRES: [WireType; 2] = [WireType::Qubit, WireType::Bit];

/// Bounded check of the laws an RMI must obey: `par` is an ordered
/// commutative monoid, `seq` an ordered monoid (both with identity
/// `empty`), `par` with a wire distributes over `seq`, and either wires
/// are free or `seq` is `max`.
pub fn validate_well_behaved(r: &Rmi, bound: u64) -> ValidationReport {
    let mut c = Checker::new();
    c.run("par-monoid", || monoid_laws(&r.par, r.empty, bound, true));
    c.run("seq-monoid", || monoid_laws(&r.seq, r.empty, bound, false));
    c.run("wire-distributes", || {
        first(WIRES.iter().flat_map(|&w| {
            (0..=bound).flat_map(move |n| (0..=bound).map(move |m| (w, n, m)))
        }).map(|(w, n, m)| {
            let wv = r.wire(w);
            (r.par.apply(wv, r.seq.apply(n, m)) != r.seq.apply(r.par.apply(wv, n), r.par.apply(wv, m)))
                .then(|| (format!("par(wire({w}),seq(n,m))"), vec![wv, n, m]))
        }))
    });
    c.run("wire-reuse", || {
        if WIRES.iter().all(|&w| r.wire(w) == r.empty) {
            return None;
        }
        first((0..=bound).flat_map(|n| (n..=bound).map(move |m| (n, m))).map(|(n, m)| {
            (r.seq.apply(n, m) != m || r.seq.apply(m, n) != m).then(|| ("seq(n,m)=seq(m,n)=m".to_string(), vec![n, m]))
        }))
    });
    c.finish(format!("well-behaved (bound {bound})"))
}

/// Bounded check that an RMI soundly over-approximates a CMI: identity
/// circuits, `par` factored over `append`, and `append` after a sequence.
pub fn validate_local_coherence(r: &Rmi, cmi: &Cmi, bound: u64) -> ValidationReport {
    let gates = crate::circuit::gate_registry();
    let mut c = Checker::new();
    c.run("id-size", || {
        if cmi.id(&WireMultiset::default()) > r.empty {
            return Some(("id(empty) <= empty".into(), vec![cmi.id(&WireMultiset::default()), r.empty]));
        }
        for q in 0..=4u64 {
            for b in 0..=(4 - q) {
                let base = WireMultiset { qubits: q, bits: b };
                for w in WIRES {
                    let mut ext = base;
                    ext.add(w);
                    if cmi.id(&ext) > r.par.apply(cmi.id(&base), r.wire(w)) {
                        return Some((format!("id(Q+{{{w}}}) <= par(id(Q),wire({w}))"), vec![q, b]));
                    }
                }
            }
        }
        None
    });
    let range = || 0..=bound;
    c.run("par-append", || {
        for g in gates {
            for w in WIRES {
                let wv = r.wire(w);
                for n in range() {
                    for m in range() {
                        for i in range() {
                            for o in range() {
                                let lhs = cmi.append(g, r.par.apply(wv, n), r.par.apply(wv, m), i, o);
                                let rhs = r.par.apply(wv, cmi.append(g, n, m, i, o));
                                if lhs > rhs {
                                    return Some((format!("gate {} wire {w}", g.name), vec![n, m, i, o]));
                                }
                            }
                        }
                    }
                }
            }
        }
        None
    });
    c.run("seq-append", || {
        for g in gates {
            for p in range() {
                for n in range() {
                    for m in range() {
                        for i in range() {
                            for o in range() {
                                let lhs = cmi.append(g, r.seq.apply(p, n), m, i, o);
                                let rhs = r.seq.apply(p, cmi.append(g, n, m, i, o));
                                if lhs > rhs {
                                    return Some((format!("gate {}", g.name), vec![p, n, m, i, o]));
                                }
                            }
                        }
                    }
                }
            }
        }
        None
    });
    c.finish(format!("local coherence (bound {bound})"))
}

/// Checks derived circuit signatures against the oracle on each circuit.
/// Global profiles compare the evaluated global index with the measurement;
/// the local profile compares every output annotation with the depth oracle
/// under `samples` input valuations (deterministic, drawn from 0..=16).
pub fn validate_cmi_sound(p: &MetricProfile, corpus: &[Circuit], samples: usize) -> ValidationReport {
    let mut c = Checker::new();
    let id = if p.is_local() { "annotation-equals-oracle" } else { "bound-dominates-oracle" };
    c.run(id, || {
        for (k, circ) in corpus.iter().enumerate() {
            let sig = infer_signature(circ);
            if !p.is_local() {
                let bound = match evaluate(&sig.global, &Valuation::new(), p) {
                    Ok(b) => b,
                    Err(e) => return Some((format!("circuit {k}: {e}"), vec![k as u64])),
                };
                let measured = p.oracle.measure(circ);
                if bound < measured {
                    return Some((format!("circuit {k}"), vec![k as u64, bound, measured]));
                }
                continue;
            }
            for s in 0..samples {
                let mut val = Valuation::new();
                let mut ins = HashMap::new();
                for (j, (l, v)) in sig.input_vars.iter().enumerate() {
                    let d = ((s * 7 + j * 3) % 17) as u64;
                    val.insert(v.clone(), d);
                    ins.insert(*l, d);
                }
                let truth = match oracle_depth(circ, &ins) {
                    Ok(t) => t,
                    Err(e) => return Some((format!("circuit {k}: {e}"), vec![k as u64])),
                };
                for (l, _, ann) in sig.outputs.iter() {
                    let ann = ann.expect("signature outputs are annotated");
                    match evaluate(ann, &val, p) {
                        Ok(v) if v == truth[&l] => {}
                        Ok(v) => return Some((format!("circuit {k} label {l}"), vec![k as u64, v, truth[&l]])),
                        Err(e) => return Some((format!("circuit {k}: {e}"), vec![k as u64])),
                    }
                }
            }
        }
        None
    });
    c.finish(format!("signature soundness for {} ({} circuits)", p.name, corpus.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::gate_decl;

    #[test]
    fn builtin_interpretations() {
        let w = profile(Profile::Width);
        let h = gate_decl("H").unwrap();
        assert_eq!(w.cmi.append(h, 2, 1, 1, 2), 3);
        let g = profile(Profile::GateCount);
        assert_eq!(g.cmi.append(gate_decl("Discard").unwrap(), 7, 0, 1, 0), 7);
        let d = profile(Profile::Depth);
        assert_eq!(d.cmi.gate(gate_decl("CNOT").unwrap(), 1, &[3, 5]), 6);
        assert_eq!(d.cmi.gate(gate_decl("Init0").unwrap(), 1, &[]), 0);
        assert_eq!(builtin_profiles().len(), 7);
        assert!(profile_by_name("qubitcount").is_some());
    }

    #[test]
    fn broken_rmi_is_rejected() {
        let broken = Rmi { seq: Combine::Custom { name: "first", op: |a, _| a }, ..WIDTH_RMI };
        let rep = validate_well_behaved(&broken, 8);
        let v = rep.violation.expect("must fail");
        assert_eq!(v.constraint, "seq-monoid");
        assert_eq!(v.witness, vec![0, 1]);
    }

    #[test]
    fn mismatched_pair_is_incoherent() {
        let rep = validate_local_coherence(&COUNT_RMI, &profile(Profile::Width).cmi, 4);
        assert_eq!(rep.violation.unwrap().constraint, "id-size");
    }

    #[test]
    fn lowering_agrees_with_evaluation() {
        use IndexTerm as I;
        let t = I::bounded_seq("m", I::var("n"), I::par(I::var("m"), I::Wire(WireType::Qubit)));
        for p in builtin_profiles() {
            let l = p.lower(&t).unwrap();
            assert!(l.is_arith());
            for n in 0..6 {
                let v = Valuation::from([("n".to_string(), n)]);
                assert_eq!(evaluate(&l, &v, p).unwrap(), evaluate(&t, &v, p).unwrap(), "{}", p.name);
            }
        }
    }
}
