//! Gate-by-gate circuits over typed, labelled wires.
//!
//! A [`Circuit`] is an identity layer on an input context followed by an
//! ordered list of gate applications. Labels are drawn from a monotone
//! counter owned by the circuit, so a label is never reused within one
//! circuit's history. The module also hosts the gate registry and the
//! ground-truth metric oracles that every static bound is measured against.

use std::collections::HashMap;
use std::fmt;

use indexmap::IndexMap;
use rand::Rng;
use thiserror::Error;

use crate::index::IndexTerm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WireType {
    Qubit,
    Bit,
}

impl fmt::Display for WireType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WireType::Qubit => "Qubit",
            WireType::Bit => "Bit",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(pub u32);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "l{}", self.0)
    }
}

/// Structured tuple/list of labels naming live wires.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Bundle {
    Unit,
    Single(Label),
    Pair(Box<Bundle>, Box<Bundle>),
    Nil,
    /// List grown rightward: `Cons(init, last)`.
    Cons(Box<Bundle>, Box<Bundle>),
}

impl Bundle {
    pub fn pair(a: Bundle, b: Bundle) -> Bundle {
        Bundle::Pair(Box::new(a), Box::new(b))
    }

    pub fn cons(init: Bundle, last: Bundle) -> Bundle {
        Bundle::Cons(Box::new(init), Box::new(last))
    }

    /// Right-nested tuple of single labels (`Unit` when empty).
    pub fn tuple(labels: &[Label]) -> Bundle {
        match labels {
            [] => Bundle::Unit,
            [l] => Bundle::Single(*l),
            [l, rest @ ..] => Bundle::pair(Bundle::Single(*l), Bundle::tuple(rest)),
        }
    }

    /// Labels in left-to-right order.
    pub fn labels(&self) -> Vec<Label> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<Label>) {
        match self {
            Bundle::Unit | Bundle::Nil => {}
            Bundle::Single(l) => out.push(*l),
            Bundle::Pair(a, b) | Bundle::Cons(a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
    }

    pub fn rename(&self, map: &HashMap<Label, Label>) -> Bundle {
        match self {
            Bundle::Unit => Bundle::Unit,
            Bundle::Nil => Bundle::Nil,
            Bundle::Single(l) => Bundle::Single(*map.get(l).unwrap_or(l)),
            Bundle::Pair(a, b) => Bundle::pair(a.rename(map), b.rename(map)),
            Bundle::Cons(a, b) => Bundle::cons(a.rename(map), b.rename(map)),
        }
    }
}

impl fmt::Display for Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bundle::Unit => f.write_str("()"),
            Bundle::Nil => f.write_str("[]"),
            Bundle::Single(l) => write!(f, "{l}"),
            Bundle::Pair(a, b) => write!(f, "({a}, {b})"),
            Bundle::Cons(a, b) => write!(f, "{a}:{b}"),
        }
    }
}

/// Ordered mapping from labels to wire types with optional index annotations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelContext {
    entries: IndexMap<Label, (WireType, Option<IndexTerm>)>,
}

impl LabelContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_wires(wires: impl IntoIterator<Item = (Label, WireType)>) -> Result<Self, CircuitError> {
        let mut ctx = Self::new();
        for (l, w) in wires {
            ctx.insert(l, w, None)?;
        }
        Ok(ctx)
    }

    pub fn insert(&mut self, l: Label, w: WireType, ann: Option<IndexTerm>) -> Result<(), CircuitError> {
        if self.entries.contains_key(&l) {
            return Err(CircuitError::DuplicateLabel(l));
        }
        self.entries.insert(l, (w, ann));
        Ok(())
    }

    pub fn remove(&mut self, l: Label) -> Option<(WireType, Option<IndexTerm>)> {
        self.entries.shift_remove(&l)
    }

    pub fn get(&self, l: Label) -> Option<&(WireType, Option<IndexTerm>)> {
        self.entries.get(&l)
    }

    pub fn wire(&self, l: Label) -> Option<WireType> {
        self.entries.get(&l).map(|e| e.0)
    }

    pub fn contains(&self, l: Label) -> bool {
        self.entries.contains_key(&l)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.entries.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Label, WireType, Option<&IndexTerm>)> + '_ {
        self.entries.iter().map(|(l, (w, a))| (*l, *w, a.as_ref()))
    }

    pub fn count(&self, kind: WireType) -> usize {
        self.entries.values().filter(|(w, _)| *w == kind).count()
    }

    pub fn wires(&self) -> Vec<WireType> {
        self.entries.values().map(|(w, _)| *w).collect()
    }
}

impl fmt::Display for LabelContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .iter()
            .map(|(l, w, a)| match a {
                Some(a) => format!("{l}:{w}{{{a}}}"),
                None => format!("{l}:{w}"),
            })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// How the local metric treats a gate's outputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalRule {
    /// Outputs sit one step after the latest input (or pass it through for
    /// operations that do not count as gates).
    MaxPlusOne,
    /// The operation produces no outputs.
    ZeroOutputs,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateDecl {
    pub name: &'static str,
    pub inputs: &'static [WireType],
    pub outputs: &'static [WireType],
    pub counts_as_gate: bool,
    pub is_t: bool,
    pub parameterized: bool,
    pub local_rule: LocalRule,
}

use WireType::{Bit, Qubit};

const fn unitary(name: &'static str, inputs: &'static [WireType], is_t: bool, parameterized: bool) -> GateDecl {
    GateDecl {
        name,
        inputs,
        outputs: inputs,
        counts_as_gate: true,
        is_t,
        parameterized,
        local_rule: LocalRule::MaxPlusOne,
    }
}

static REGISTRY: [GateDecl; 13] = [
    unitary("H", &[Qubit], false, false),
    unitary("X", &[Qubit], false, false),
    unitary("Z", &[Qubit], false, false),
    unitary("T", &[Qubit], true, false),
    unitary("CNOT", &[Qubit, Qubit], false, false),
    unitary("CR", &[Qubit, Qubit], false, true),
    unitary("CX_classical", &[Bit, Qubit], false, false),
    unitary("CZ_classical", &[Bit, Qubit], false, false),
    GateDecl {
        name: "Meas",
        inputs: &[Qubit],
        outputs: &[Bit],
        counts_as_gate: true,
        is_t: false,
        parameterized: false,
        local_rule: LocalRule::MaxPlusOne,
    },
    GateDecl {
        name: "Init0",
        inputs: &[],
        outputs: &[Qubit],
        counts_as_gate: false,
        is_t: false,
        parameterized: false,
        local_rule: LocalRule::MaxPlusOne,
    },
    GateDecl {
        name: "Init1",
        inputs: &[],
        outputs: &[Qubit],
        counts_as_gate: false,
        is_t: false,
        parameterized: false,
        local_rule: LocalRule::MaxPlusOne,
    },
    GateDecl {
        name: "Discard",
        inputs: &[Qubit],
        outputs: &[],
        counts_as_gate: false,
        is_t: false,
        parameterized: false,
        local_rule: LocalRule::ZeroOutputs,
    },
    GateDecl {
        name: "CDiscard",
        inputs: &[Bit],
        outputs: &[],
        counts_as_gate: false,
        is_t: false,
        parameterized: false,
        local_rule: LocalRule::ZeroOutputs,
    },
];

/// All registered gate declarations.
pub fn gate_registry() -> &'static [GateDecl] {
    &REGISTRY
}

pub fn gate_decl(name: &str) -> Option<&'static GateDecl> {
    REGISTRY.iter().find(|g| g.name == name)
}

/// A gate family plus its (possibly symbolic) parameter, e.g. `CR[k]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GateRef {
    pub name: String,
    pub param: Option<IndexTerm>,
}

impl GateRef {
    pub fn new(name: &str) -> Self {
        GateRef { name: name.to_string(), param: None }
    }

    pub fn with_param(name: &str, param: IndexTerm) -> Self {
        GateRef { name: name.to_string(), param: Some(param) }
    }

    pub fn decl(&self) -> Result<&'static GateDecl, CircuitError> {
        gate_decl(&self.name).ok_or_else(|| CircuitError::UnknownGate(self.name.clone()))
    }
}

impl fmt::Display for GateRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.param {
            Some(p) => write!(f, "{}[{}]", self.name, p),
            None => f.write_str(&self.name),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GateApp {
    pub gate: GateRef,
    pub inputs: Vec<Label>,
    pub outputs: Vec<Label>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("duplicate label {0}")]
    DuplicateLabel(Label),
    #[error("label {0} is not a live output")]
    NotLive(Label),
    #[error("gate {gate}: expected {expected} on input {pos}, found {found}")]
    TypeMismatch { gate: String, pos: usize, expected: WireType, found: WireType },
    #[error("gate {gate}: expected {expected} inputs, got {got}")]
    Arity { gate: String, expected: usize, got: usize },
    #[error("unknown gate {0}")]
    UnknownGate(String),
    #[error("gate {0} needs a parameter")]
    MissingParam(String),
    #[error("interface mismatch: {0}")]
    Interface(String),
    #[error("missing input depth for {0}")]
    MissingDepth(Label),
    #[error("circuit text line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

/// A CRL circuit: identity on `initial`, followed by `gates`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    initial: LabelContext,
    gates: Vec<GateApp>,
    live: LabelContext,
    next_label: u32,
}

impl Circuit {
    pub fn identity(q: LabelContext) -> Circuit {
        let next_label = q.labels().map(|l| l.0 + 1).max().unwrap_or(0);
        Circuit { live: q.clone(), initial: q, gates: Vec::new(), next_label }
    }

    pub fn empty() -> Circuit {
        Circuit::identity(LabelContext::new())
    }

    /// Identity on `wires.len()` fresh labels `l0, l1, …`.
    pub fn on_wires(wires: &[WireType]) -> (Circuit, Vec<Label>) {
        let labels: Vec<Label> = (0..wires.len() as u32).map(Label).collect();
        let q = LabelContext::from_wires(labels.iter().copied().zip(wires.iter().copied()))
            .expect("fresh labels are distinct");
        (Circuit::identity(q), labels)
    }

    pub fn initial(&self) -> &LabelContext {
        &self.initial
    }

    pub fn gates(&self) -> &[GateApp] {
        &self.gates
    }

    pub fn live_outputs(&self) -> &LabelContext {
        &self.live
    }

    /// Draws a label never used by this circuit.
    pub fn fresh_label(&mut self) -> Label {
        let l = Label(self.next_label);
        self.next_label += 1;
        l
    }

    /// Makes sure later fresh labels are above `l`.
    pub fn reserve(&mut self, l: Label) {
        self.next_label = self.next_label.max(l.0 + 1);
    }

    /// Adds a fresh wire to the input layer (only valid before any gate).
    pub fn add_input(&mut self, w: WireType) -> Result<Label, CircuitError> {
        if !self.gates.is_empty() {
            return Err(CircuitError::Interface("inputs can only be added to an identity circuit".into()));
        }
        let l = self.fresh_label();
        self.initial.insert(l, w, None)?;
        self.live.insert(l, w, None)?;
        Ok(l)
    }

    /// Appends `gate` in place, returning the freshly created output labels.
    pub fn push_gate(&mut self, gate: GateRef, inputs: &[Label]) -> Result<Vec<Label>, CircuitError> {
        let decl = gate.decl()?;
        self.check_inputs(&gate, decl, inputs)?;
        let outputs: Vec<Label> = decl.outputs.iter().map(|_| self.fresh_label()).collect();
        self.commit(gate, decl, inputs.to_vec(), outputs.clone())?;
        Ok(outputs)
    }

    /// Functional variant of [`Circuit::push_gate`].
    pub fn append(&self, gate: GateRef, inputs: &[Label]) -> Result<(Circuit, Vec<Label>), CircuitError> {
        let mut c = self.clone();
        let outs = c.push_gate(gate, inputs)?;
        Ok((c, outs))
    }

    fn check_inputs(&self, gate: &GateRef, decl: &GateDecl, inputs: &[Label]) -> Result<(), CircuitError> {
        if decl.parameterized && gate.param.is_none() {
            return Err(CircuitError::MissingParam(gate.name.clone()));
        }
        if inputs.len() != decl.inputs.len() {
            return Err(CircuitError::Arity {
                gate: gate.name.clone(),
                expected: decl.inputs.len(),
                got: inputs.len(),
            });
        }
        for (pos, (l, want)) in inputs.iter().zip(decl.inputs).enumerate() {
            let found = self.live.wire(*l).ok_or(CircuitError::NotLive(*l))?;
            if found != *want {
                return Err(CircuitError::TypeMismatch { gate: gate.name.clone(), pos, expected: *want, found });
            }
        }
        let mut seen = inputs.to_vec();
        seen.sort();
        seen.dedup();
        if seen.len() != inputs.len() {
            return Err(CircuitError::Interface(format!("gate {} uses a label twice", gate.name)));
        }
        Ok(())
    }

    fn commit(&mut self, gate: GateRef, decl: &GateDecl, inputs: Vec<Label>, outputs: Vec<Label>) -> Result<(), CircuitError> {
        for l in &inputs {
            self.live.remove(*l);
        }
        for (l, w) in outputs.iter().zip(decl.outputs) {
            self.reserve(*l);
            self.live.insert(*l, *w, None)?;
        }
        self.gates.push(GateApp { gate, inputs, outputs });
        Ok(())
    }

    /// `self` followed by all of `d`'s gates; `d`'s inputs must be live here.
    pub fn concat(&self, d: &Circuit) -> Result<Circuit, CircuitError> {
        for (l, w, _) in d.initial.iter() {
            match self.live.wire(l) {
                Some(found) if found == w => {}
                Some(found) => {
                    return Err(CircuitError::Interface(format!("{l} is {found} here but {w} in the appended circuit")))
                }
                None => return Err(CircuitError::Interface(format!("{l} is not live"))),
            }
        }
        let mut c = self.clone();
        for g in &d.gates {
            for l in &g.outputs {
                if c.live.contains(*l) || c.used_anywhere(*l) {
                    return Err(CircuitError::Interface(format!("output label {l} collides")));
                }
            }
            let decl = g.gate.decl()?;
            c.check_inputs(&g.gate, decl, &g.inputs)?;
            c.commit(g.gate.clone(), decl, g.inputs.clone(), g.outputs.clone())?;
        }
        Ok(c)
    }

    fn used_anywhere(&self, l: Label) -> bool {
        self.initial.contains(l) || self.gates.iter().any(|g| g.outputs.contains(&l))
    }

    /// Every label mentioned anywhere in the circuit.
    pub fn all_labels(&self) -> Vec<Label> {
        let mut out: Vec<Label> = self.initial.labels().collect();
        for g in &self.gates {
            out.extend(g.outputs.iter().copied());
        }
        out
    }

    /// Renames labels; labels absent from `map` keep their name.
    pub fn rename(&self, map: &HashMap<Label, Label>) -> Circuit {
        let r = |l: &Label| *map.get(l).unwrap_or(l);
        let mut initial = LabelContext::new();
        for (l, w, a) in self.initial.iter() {
            initial.insert(r(&l), w, a.cloned()).expect("renaming must be injective");
        }
        let mut live = LabelContext::new();
        for (l, w, a) in self.live.iter() {
            live.insert(r(&l), w, a.cloned()).expect("renaming must be injective");
        }
        let gates = self
            .gates
            .iter()
            .map(|g| GateApp {
                gate: g.gate.clone(),
                inputs: g.inputs.iter().map(r).collect(),
                outputs: g.outputs.iter().map(r).collect(),
            })
            .collect();
        let next_label = initial
            .labels()
            .chain(self.gates.iter().flat_map(|g| g.outputs.iter().map(r)))
            .map(|l| l.0 + 1)
            .max()
            .unwrap_or(0)
            .max(self.next_label);
        Circuit { initial, gates, live, next_label }
    }

    /// Applies `f` to every gate parameter.
    pub fn map_params(&self, f: &mut dyn FnMut(&IndexTerm) -> IndexTerm) -> Circuit {
        let mut c = self.clone();
        for g in &mut c.gates {
            if let Some(p) = &g.gate.param {
                g.gate.param = Some(f(p));
            }
        }
        c
    }

    /// Line-oriented text: an `id(...)` header, then one `g(in...; out...)` per gate.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let ins: Vec<String> = self.initial.iter().map(|(l, w, _)| format!("{l}:{w}")).collect();
        s.push_str(&format!("id({})\n", ins.join(", ")));
        for g in &self.gates {
            let ins: Vec<String> = g.inputs.iter().map(|l| l.to_string()).collect();
            let outs: Vec<String> = g.outputs.iter().map(|l| l.to_string()).collect();
            s.push_str(&format!("{}({}; {})\n", g.gate, ins.join(", "), outs.join(", ")));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Circuit, CircuitError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let syntax = |line: usize, msg: &str| CircuitError::Syntax { line: line + 1, msg: msg.to_string() };
        let (n, header) = lines.next().ok_or_else(|| syntax(0, "empty circuit text"))?;
        let inner = header
            .trim()
            .strip_prefix("id(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| syntax(n, "expected id(...) header"))?;
        let mut q = LabelContext::new();
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (l, w) = part.split_once(':').ok_or_else(|| syntax(n, "expected label:Type"))?;
            let l = parse_label(l).ok_or_else(|| syntax(n, "bad label"))?;
            let w = match w.trim() {
                "Qubit" => Qubit,
                "Bit" => Bit,
                _ => return Err(syntax(n, "bad wire type")),
            };
            q.insert(l, w, None)?;
        }
        let mut c = Circuit::identity(q);
        for (n, line) in lines {
            let line = line.trim();
            let open = line.find('(').ok_or_else(|| syntax(n, "expected ("))?;
            let head = &line[..open];
            let body = line[open + 1..].strip_suffix(')').ok_or_else(|| syntax(n, "expected )"))?;
            let gate = match head.split_once('[') {
                Some((name, rest)) => {
                    let p = rest.strip_suffix(']').ok_or_else(|| syntax(n, "expected ]"))?;
                    let p: u64 = p.trim().parse().map_err(|_| syntax(n, "gate parameter must be a natural"))?;
                    GateRef::with_param(name, IndexTerm::Nat(p))
                }
                None => GateRef::new(head),
            };
            let (ins, outs) = body.split_once(';').ok_or_else(|| syntax(n, "expected ;"))?;
            let parse_list = |s: &str| -> Result<Vec<Label>, CircuitError> {
                s.split(',')
                    .map(str::trim)
                    .filter(|p| !p.is_empty())
                    .map(|p| parse_label(p).ok_or_else(|| syntax(n, "bad label")))
                    .collect()
            };
            let ins = parse_list(ins)?;
            let outs = parse_list(outs)?;
            let decl = gate.decl()?;
            c.check_inputs(&gate, decl, &ins)?;
            if outs.len() != decl.outputs.len() {
                return Err(syntax(n, "wrong number of outputs"));
            }
            for l in &outs {
                if c.used_anywhere(*l) {
                    return Err(CircuitError::DuplicateLabel(*l));
                }
            }
            c.commit(gate, decl, ins, outs)?;
        }
        Ok(c)
    }
}

fn parse_label(s: &str) -> Option<Label> {
    s.trim().strip_prefix('l')?.parse().ok().map(Label)
}

fn wire_filter(kind: Option<WireType>) -> impl Fn(&WireType) -> bool {
    move |w| kind.is_none_or(|k| *w == k)
}

/// Width recursion, optionally restricted to one wire kind.
fn width_restricted(c: &Circuit, kind: Option<WireType>) -> u64 {
    let keep = wire_filter(kind);
    let mut live = c.initial.wires().iter().filter(|w| keep(w)).count() as u64;
    let mut width = live;
    for g in &c.gates {
        let decl = g.gate.decl().expect("registered gate");
        let ins = decl.inputs.iter().filter(|w| keep(w)).count() as u64;
        let outs = decl.outputs.iter().filter(|w| keep(w)).count() as u64;
        let discarded = width - live;
        width += outs.saturating_sub(ins).saturating_sub(discarded);
        live = live - ins + outs;
    }
    width
}

pub fn oracle_width(c: &Circuit) -> u64 {
    width_restricted(c, None)
}

pub fn oracle_qubit_width(c: &Circuit) -> u64 {
    width_restricted(c, Some(Qubit))
}

pub fn oracle_bit_width(c: &Circuit) -> u64 {
    width_restricted(c, Some(Bit))
}

pub fn oracle_gatecount(c: &Circuit) -> u64 {
    c.gates.iter().filter(|g| g.gate.decl().is_ok_and(|d| d.counts_as_gate)).count() as u64
}

/// Every appended operation, inits and discards included.
pub fn oracle_gatecount_all(c: &Circuit) -> u64 {
    c.gates.len() as u64
}

pub fn oracle_tcount(c: &Circuit) -> u64 {
    c.gates.iter().filter(|g| g.gate.decl().is_ok_and(|d| d.is_t)).count() as u64
}

/// Per-label depth of the live outputs given depths of the inputs.
pub fn oracle_depth(c: &Circuit, in_depths: &HashMap<Label, u64>) -> Result<HashMap<Label, u64>, CircuitError> {
    let mut depth: HashMap<Label, u64> = HashMap::new();
    for l in c.initial.labels() {
        depth.insert(l, *in_depths.get(&l).ok_or(CircuitError::MissingDepth(l))?);
    }
    for g in &c.gates {
        let decl = g.gate.decl()?;
        let latest = g.inputs.iter().map(|l| depth[l]).max().unwrap_or(0);
        let d = if decl.counts_as_gate && !g.inputs.is_empty() { latest + 1 } else { latest };
        for l in &g.inputs {
            depth.remove(l);
        }
        for l in &g.outputs {
            depth.insert(*l, d);
        }
    }
    Ok(depth)
}

/// Maximum output depth with every input at depth 0.
pub fn oracle_max_depth(c: &Circuit) -> u64 {
    let zeros = c.initial.labels().map(|l| (l, 0)).collect();
    oracle_depth(c, &zeros).expect("all inputs covered").values().copied().max().unwrap_or(0)
}

/// A random well-formed circuit with up to `max_gates` gates over the
/// registry (CR gates get a small closed parameter).
pub fn random_circuit<R: Rng>(rng: &mut R, max_gates: usize) -> Circuit {
    let n_inputs = rng.gen_range(0..=3);
    let wires: Vec<WireType> = (0..n_inputs).map(|_| if rng.gen_bool(0.75) { Qubit } else { Bit }).collect();
    let (mut c, _) = Circuit::on_wires(&wires);
    let n_gates = rng.gen_range(0..=max_gates);
    let mut attempts = 0;
    while c.gates.len() < n_gates && attempts < 200 {
        attempts += 1;
        let decl = &REGISTRY[rng.gen_range(0..REGISTRY.len())];
        let mut chosen = Vec::new();
        let mut ok = true;
        for want in decl.inputs {
            let candidates: Vec<Label> =
                c.live.iter().filter(|(l, w, _)| w == want && !chosen.contains(l)).map(|(l, _, _)| l).collect();
            if candidates.is_empty() {
                ok = false;
                break;
            }
            chosen.push(candidates[rng.gen_range(0..candidates.len())]);
        }
        if !ok {
            continue;
        }
        let gate = if decl.parameterized {
            GateRef::with_param(decl.name, IndexTerm::Nat(rng.gen_range(1..5)))
        } else {
            GateRef::new(decl.name)
        };
        c.push_gate(gate, &chosen).expect("inputs chosen from live wires");
    }
    c
}

/// The teleportation circuit: one input qubit, two ancillas, eight gates,
/// and both measured bits discarded at the end.
pub fn teleportation_circuit() -> Circuit {
    let (mut c, ins) = Circuit::on_wires(&[Qubit]);
    let q = ins[0];
    let g = |name: &str| GateRef::new(name);
    let a = c.push_gate(g("Init0"), &[]).unwrap()[0];
    let b = c.push_gate(g("Init0"), &[]).unwrap()[0];
    let b = c.push_gate(g("H"), &[b]).unwrap()[0];
    let ba = c.push_gate(g("CNOT"), &[b, a]).unwrap();
    let (b, a) = (ba[0], ba[1]);
    let qa = c.push_gate(g("CNOT"), &[q, a]).unwrap();
    let (q, a) = (qa[0], qa[1]);
    let q = c.push_gate(g("H"), &[q]).unwrap()[0];
    let x = c.push_gate(g("Meas"), &[q]).unwrap()[0];
    let y = c.push_gate(g("Meas"), &[a]).unwrap()[0];
    let yb = c.push_gate(g("CX_classical"), &[y, b]).unwrap();
    let (y, b) = (yb[0], yb[1]);
    let xb = c.push_gate(g("CZ_classical"), &[x, b]).unwrap();
    let x = xb[0];
    c.push_gate(g("CDiscard"), &[x]).unwrap();
    c.push_gate(g("CDiscard"), &[y]).unwrap();
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dumb_not() -> Circuit {
        let (mut c, ins) = Circuit::on_wires(&[Qubit]);
        let a = c.push_gate(GateRef::new("Init1"), &[]).unwrap()[0];
        let out = c.push_gate(GateRef::new("CNOT"), &[ins[0], a]).unwrap();
        c.push_gate(GateRef::new("Discard"), &[out[1]]).unwrap();
        c
    }

    #[test]
    fn identity_width_counts_all_wires() {
        let (c, _) = Circuit::on_wires(&[Qubit, Bit]);
        assert_eq!(oracle_width(&c), 2);
        assert_eq!(c.gates().len(), 0);
        assert_eq!(oracle_gatecount(&Circuit::empty()), 0);
    }

    #[test]
    fn teleportation_golden() {
        let c = teleportation_circuit();
        assert_eq!(oracle_gatecount(&c), 8);
        assert_eq!(oracle_width(&c), 3);
        assert_eq!(oracle_max_depth(&c), 6);
        assert_eq!(oracle_tcount(&c), 0);
        assert_eq!(oracle_qubit_width(&c), 3);
        assert_eq!(oracle_bit_width(&c), 2);
        assert_eq!(oracle_gatecount_all(&c), 12);
    }

    #[test]
    fn dumb_not_golden() {
        let c = dumb_not();
        assert_eq!(c.live_outputs().len(), 1);
        assert_eq!(oracle_width(&c), 2);
        assert_eq!(oracle_gatecount(&c), 1);
        assert_eq!(oracle_max_depth(&c), 1);
    }

    #[test]
    fn append_rejects_wrong_wire_type() {
        let (c, ins) = Circuit::on_wires(&[Bit]);
        assert!(matches!(c.append(GateRef::new("H"), &ins), Err(CircuitError::TypeMismatch { .. })));
        assert!(matches!(c.append(GateRef::new("CNOT"), &ins), Err(CircuitError::Arity { .. })));
        assert!(matches!(c.append(GateRef::new("H"), &[Label(9)]), Err(CircuitError::NotLive(_))));
    }

    #[test]
    fn concat_with_identity_and_mismatch() {
        let c = dumb_not();
        let id = Circuit::identity(c.live_outputs().clone());
        assert_eq!(c.concat(&id).unwrap().gates(), c.gates());
        let (other, _) = Circuit::on_wires(&[Bit]);
        assert!(c.concat(&other).is_err());
    }

    #[test]
    fn single_t_counts() {
        let (c, ins) = Circuit::on_wires(&[Qubit]);
        let (c, _) = c.append(GateRef::new("T"), &ins).unwrap();
        assert_eq!(oracle_tcount(&c), 1);
    }

    #[test]
    fn text_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let c = random_circuit(&mut rng, 10);
            let back = Circuit::from_text(&c.to_text()).unwrap();
            assert_eq!(back.gates(), c.gates());
            assert_eq!(back.live_outputs(), c.live_outputs());
        }
    }
}
