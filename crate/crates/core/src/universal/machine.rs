//! The construction machine: a vertex that reads the code of a graph off a
//! tape and builds the graph next to itself, one local rewrite per step.
//!
//! The world has `base + 7` ports where `base = max(d, 2)` and `d` is the
//! port count of the simulated family. The machine vertex uses port
//! `base + k` for role `k`:
//!
//! | k | role |
//! |---|------|
//! | 1 | tape head |
//! | 2 | rule holder |
//! | 3 | arm on the vertex being built (`L`) |
//! | 4 | arm walking back up the DFS tree (`V`) |
//! | 5 | top of the stack |
//! | 6 | stack reader |
//! | 7 | buffer |
//!
//! Tape cells link port 2 to the next cell's port 1. Stack cells hold the
//! tree edges from the root down to `L`, top cell first, and link port 2 to
//! the cell below; port 3 takes the reader. Built vertices take the arms on
//! `base + 3` and `base + 4`.
//!
//! Transitions, by phase and head token:
//!
//! | phase | token | effect | next |
//! |-------|-------|--------|------|
//! | ReadSeparator | `$` | consume | ReadLabel |
//! | ReadSeparator | end | | Finish |
//! | ReadLabel | `σ` | consume; create the root or label the pending vertex | ReadBackEdge |
//! | ReadBackEdge | `(i,j)` | consume; buffer it; arm 4 on `L`; reader on the top cell | WalkBack |
//! | ReadBackEdge | `;` | consume | ReadPath |
//! | WalkBack | `\|` | consume; arm 4 one tree edge up; reader one cell down | WalkBack |
//! | WalkBack | other | | PlaceBackEdge |
//! | PlaceBackEdge | any | add `L:i - V:j`; clear buffer, arm 4 and reader | ReadBackEdge |
//! | ReadPath | `(s,t)` | consume; buffer it | ExtendPath |
//! | ReadPath | other | | ReadSeparator |
//! | ExtendPath | any | walk `L` up the tree, or create a pending vertex on `L:s` and push | ReadPath |
//! | Finish | any | pop one stack cell, or remove the scaffolding once empty | Halted |
//!
//! Every step changes only vertices within distance 2 of the machine; this
//! is checked against a snapshot on each step.

use std::fmt;

use crate::codec::{encode_graph, GraphCode, GraphToken};
use crate::graph::{bfs_depths, canonical_from, CayleyGraph, End, Port, Step};

use super::{RuleRef, SimLabel, UniversalError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MachinePhase {
    ReadSeparator,
    ReadLabel,
    ReadBackEdge,
    WalkBack,
    PlaceBackEdge,
    ReadPath,
    ExtendPath,
    Finish,
    Halted,
}

impl fmt::Display for MachinePhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Labels of world vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum WorldLabel {
    Machine(MachinePhase),
    Token(GraphToken),
    RuleHolder(RuleRef),
    Buffer(Option<(Port, Port)>),
    /// A stack cell holding the tree edge `parent:out - child:into`.
    Cell(Step),
    /// Created, label not read yet.
    Pending,
    Built(SimLabel),
}

impl fmt::Display for WorldLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WorldLabel::Machine(p) => write!(f, "M:{p}"),
            WorldLabel::Token(t) => write!(f, "{t}"),
            WorldLabel::RuleHolder(r) => write!(f, "rule|{}", r.short()),
            WorldLabel::Buffer(None) => f.write_str("buf"),
            WorldLabel::Buffer(Some((i, j))) => write!(f, "buf({i},{j})"),
            WorldLabel::Cell(s) => write!(f, "cell({},{})", s.out, s.into),
            WorldLabel::Pending => f.write_str("?"),
            WorldLabel::Built(l) => write!(f, "{l}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
enum Role {
    Tape = 1,
    Rule = 2,
    Last = 3,
    Back = 4,
    Stack = 5,
    Reader = 6,
    Buffer = 7,
}

const CELL_UP: Port = 1;
const CELL_DOWN: Port = 2;
const CELL_READER: Port = 3;
const TAPE_PREV: Port = 1;
const TAPE_NEXT: Port = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Vertex {
    label: WorldLabel,
    adj: Vec<Option<End>>,
}

/// One line of the machine log.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRecord {
    pub step: usize,
    /// Phase the step ran in.
    pub phase: MachinePhase,
    /// Tokens consumed so far.
    pub tape_position: usize,
    pub stack_depth: usize,
    /// Vertices built so far.
    pub built: usize,
    /// Vertices created, deleted or modified by the step.
    pub changed: usize,
    /// Largest distance from the machine among changed vertices.
    pub max_distance: usize,
}

impl fmt::Display for TraceRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "step={} phase={} tape={} stack={} built={} changed={} reach={}",
            self.step, self.phase, self.tape_position, self.stack_depth, self.built, self.changed, self.max_distance
        )
    }
}

/// The machine together with its tape, rule holder, stack, buffer and the
/// graph built so far.
#[derive(Clone, Debug)]
pub struct MachineGraph {
    ports: Port,
    base: Port,
    sim_ports: Port,
    labels: u16,
    verts: Vec<Option<Vertex>>,
    machine: usize,
    root: Option<usize>,
    rule: RuleRef,
    steps: usize,
    consumed: usize,
    stack_depth: usize,
    built: usize,
}

/// Places the code of `x` on a tape next to a fresh machine holding `rule`.
pub fn build_machine_world(x: &CayleyGraph<u16>, rule: &RuleRef) -> Result<MachineGraph, UniversalError> {
    let p = rule.description().params;
    if x.ports() != p.ports {
        return Err(UniversalError::ParamMismatch(format!(
            "graph has {} ports, rule has {}",
            x.ports(),
            p.ports
        )));
    }
    Ok(world_from_code(&encode_graph(x), rule))
}

/// A machine world whose tape holds `code` as given. Malformed codes are
/// only detected when the machine reaches the offending token.
pub fn world_from_code(code: &GraphCode, rule: &RuleRef) -> MachineGraph {
    let p = rule.description().params;
    let base = p.ports.max(2);
    let mut w = MachineGraph {
        ports: base + 7,
        base,
        sim_ports: p.ports,
        labels: p.labels,
        verts: Vec::new(),
        machine: 0,
        root: None,
        rule: rule.clone(),
        steps: 0,
        consumed: 0,
        stack_depth: 0,
        built: 0,
    };
    w.machine = w.add(WorldLabel::Machine(MachinePhase::ReadSeparator));
    let holder = w.add(WorldLabel::RuleHolder(rule.clone()));
    w.link(w.role(Role::Rule), End::new(holder, 1));
    let buffer = w.add(WorldLabel::Buffer(None));
    w.link(w.role(Role::Buffer), End::new(buffer, 1));
    let mut prev = w.role(Role::Tape);
    for t in code.tokens() {
        let v = w.add(WorldLabel::Token(*t));
        w.link(prev, End::new(v, TAPE_PREV));
        prev = End::new(v, TAPE_NEXT);
    }
    w
}

impl MachineGraph {
    pub fn ports(&self) -> Port {
        self.ports
    }

    pub fn phase(&self) -> MachinePhase {
        match self.verts[self.machine].as_ref().map(|v| &v.label) {
            Some(WorldLabel::Machine(p)) => *p,
            _ => MachinePhase::Halted,
        }
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn vertex_count(&self) -> usize {
        self.verts.iter().flatten().count()
    }

    /// Tokens still on the tape, head first.
    pub fn tape(&self) -> Vec<GraphToken> {
        let mut out = Vec::new();
        let mut cur = self.arm(Role::Tape);
        while let Some(v) = cur {
            if let WorldLabel::Token(t) = self.label(v) {
                out.push(*t);
            }
            cur = self.nb(v, TAPE_NEXT).map(|e| e.vertex);
        }
        out
    }

    /// The world pointed at the machine, while it runs.
    pub fn snapshot(&self) -> CayleyGraph<WorldLabel> {
        canonical_from(
            self.ports,
            |v, p| self.nb(v, p),
            |v| self.label(v).clone(),
            self.machine,
            None,
        )
        .graph
    }

    fn role(&self, r: Role) -> End {
        End::new(self.machine, self.base + r as u8)
    }

    fn arm_port(&self, r: Role) -> Port {
        self.base + r as u8
    }

    fn label(&self, v: usize) -> &WorldLabel {
        &self.verts[v].as_ref().expect("live vertex").label
    }

    fn set_label(&mut self, v: usize, l: WorldLabel) {
        self.verts[v].as_mut().expect("live vertex").label = l;
    }

    fn nb(&self, v: usize, p: Port) -> Option<End> {
        self.verts[v].as_ref()?.adj[usize::from(p) - 1]
    }

    fn arm(&self, r: Role) -> Option<usize> {
        self.nb(self.machine, self.base + r as u8).map(|e| e.vertex)
    }

    fn add(&mut self, label: WorldLabel) -> usize {
        self.verts.push(Some(Vertex {
            label,
            adj: vec![None; usize::from(self.ports)],
        }));
        self.verts.len() - 1
    }

    fn set_end(&mut self, at: End, to: Option<End>) {
        self.verts[at.vertex].as_mut().expect("live vertex").adj[usize::from(at.port) - 1] = to;
    }

    fn link(&mut self, a: End, b: End) {
        debug_assert!(self.nb(a.vertex, a.port).is_none() && self.nb(b.vertex, b.port).is_none());
        self.set_end(a, Some(b));
        self.set_end(b, Some(a));
    }

    fn unlink(&mut self, at: End) -> Option<End> {
        let other = self.nb(at.vertex, at.port)?;
        self.set_end(at, None);
        self.set_end(other, None);
        Some(other)
    }

    fn delete(&mut self, v: usize) {
        for p in 1..=self.ports {
            self.unlink(End::new(v, p));
        }
        self.verts[v] = None;
    }

    /// Points the arm of role `r` at port `r` of `target`.
    fn move_arm(&mut self, r: Role, target: Option<usize>) {
        self.unlink(self.role(r));
        if let Some(t) = target {
            let p = self.arm_port(r);
            self.link(self.role(r), End::new(t, p));
        }
    }

    fn head(&self) -> Option<GraphToken> {
        match self.arm(Role::Tape).map(|v| self.label(v)) {
            Some(WorldLabel::Token(t)) => Some(*t),
            _ => None,
        }
    }

    fn consume(&mut self) {
        let head = self.arm(Role::Tape).expect("a token to consume");
        let next = self.nb(head, TAPE_NEXT);
        self.delete(head);
        if let Some(n) = next {
            self.link(self.role(Role::Tape), End::new(n.vertex, TAPE_PREV));
        }
        self.consumed += 1;
    }

    fn buffer(&self) -> Option<(Port, Port)> {
        match self.arm(Role::Buffer).map(|v| self.label(v)) {
            Some(WorldLabel::Buffer(b)) => *b,
            _ => None,
        }
    }

    fn set_buffer(&mut self, b: Option<(Port, Port)>) {
        let v = self.arm(Role::Buffer).expect("buffer vertex");
        self.set_label(v, WorldLabel::Buffer(b));
    }

    fn top_cell(&self) -> Option<(usize, Step)> {
        let c = self.arm(Role::Stack)?;
        match self.label(c) {
            WorldLabel::Cell(s) => Some((c, *s)),
            _ => None,
        }
    }

    fn push(&mut self, step: Step) {
        let cell = self.add(WorldLabel::Cell(step));
        let old = self.unlink(self.role(Role::Stack));
        self.link(self.role(Role::Stack), End::new(cell, CELL_UP));
        if let Some(o) = old {
            self.link(End::new(cell, CELL_DOWN), o);
        }
        self.stack_depth += 1;
    }

    fn pop(&mut self) {
        let (cell, _) = self.top_cell().expect("nonempty stack");
        let below = self.nb(cell, CELL_DOWN);
        self.delete(cell);
        if let Some(b) = below {
            self.link(self.role(Role::Stack), b);
        }
        self.stack_depth -= 1;
    }

    fn set_phase(&mut self, p: MachinePhase) {
        self.set_label(self.machine, WorldLabel::Machine(p));
    }

    fn is_pending(&self, v: Option<usize>) -> bool {
        v.is_some_and(|v| *self.label(v) == WorldLabel::Pending)
    }

    fn malformed(&self, witness: impl Into<String>) -> UniversalError {
        UniversalError::Malformed {
            phase: self.phase(),
            witness: witness.into(),
        }
    }

    fn check_ports(&self, i: Port, j: Port) -> Result<(), UniversalError> {
        let ok = |p| (1..=self.sim_ports).contains(&p);
        if ok(i) && ok(j) {
            Ok(())
        } else {
            Err(self.malformed(format!("pair ({i},{j}) outside ports 1..={}", self.sim_ports)))
        }
    }

    /// One transition. Fails if the world is malformed or the step reaches
    /// beyond distance 2 of the machine.
    pub fn step(&mut self) -> Result<TraceRecord, UniversalError> {
        let phase = self.phase();
        if phase == MachinePhase::Halted {
            return Err(self.malformed("machine already halted"));
        }
        let before = self.verts.clone();
        let near = bfs_depths(self.ports, |v, p| self.nb(v, p), self.machine, Some(2));
        self.transition(phase)?;
        self.steps += 1;

        let mut changed = 0;
        let mut reach = 0;
        for (id, after) in self.verts.iter().enumerate() {
            let old = before.get(id).cloned().flatten();
            if old == *after {
                continue;
            }
            changed += 1;
            if id >= before.len() {
                // created this step: must hang off the neighbourhood
                let v = after.as_ref().unwrap();
                if v.adj
                    .iter()
                    .flatten()
                    .any(|e| e.vertex < before.len() && !near.contains_key(&e.vertex))
                {
                    return Err(UniversalError::Locality {
                        step: self.steps,
                        detail: format!("new vertex {id} attached outside radius 2"),
                    });
                }
                continue;
            }
            match near.get(&id) {
                Some(&d) => reach = reach.max(d),
                None => {
                    return Err(UniversalError::Locality {
                        step: self.steps,
                        detail: format!("vertex {id} changed outside radius 2"),
                    })
                }
            }
        }
        Ok(TraceRecord {
            step: self.steps,
            phase,
            tape_position: self.consumed,
            stack_depth: self.stack_depth,
            built: self.built,
            changed,
            max_distance: reach,
        })
    }

    fn transition(&mut self, phase: MachinePhase) -> Result<(), UniversalError> {
        use MachinePhase::*;
        let last = self.arm(Role::Last);
        match phase {
            ReadSeparator => match self.head() {
                Some(GraphToken::Dollar) => {
                    if self.root.is_some() && !self.is_pending(last) {
                        return Err(self.malformed("'$' without a new vertex to describe"));
                    }
                    self.consume();
                    self.set_phase(ReadLabel);
                }
                None => {
                    if self.is_pending(last) {
                        return Err(self.malformed("tape ends before the new vertex is described"));
                    }
                    if self.root.is_none() {
                        return Err(self.malformed("empty tape"));
                    }
                    self.set_phase(Finish);
                }
                Some(t) => return Err(self.malformed(format!("expected '$', found {t}"))),
            },
            ReadLabel => {
                let Some(GraphToken::Label(sigma)) = self.head() else {
                    return Err(self.malformed("expected a label"));
                };
                if sigma >= self.labels {
                    return Err(self.malformed(format!("label {sigma} outside 0..{}", self.labels)));
                }
                self.consume();
                let label = WorldLabel::Built(SimLabel {
                    base: sigma,
                    rule: self.rule_from_holder(),
                });
                match self.root {
                    None => {
                        let v = self.add(label);
                        self.root = Some(v);
                        self.move_arm(Role::Last, Some(v));
                    }
                    Some(_) => self.set_label(last.expect("pending vertex"), label),
                }
                self.built += 1;
                self.set_phase(ReadBackEdge);
            }
            ReadBackEdge => match self.head() {
                Some(GraphToken::Pair(i, j)) => {
                    self.check_ports(i, j)?;
                    self.consume();
                    self.set_buffer(Some((i, j)));
                    self.move_arm(Role::Back, last);
                    let top = self.top_cell().map(|(c, _)| c);
                    self.unlink(self.role(Role::Reader));
                    if let Some(c) = top {
                        self.link(self.role(Role::Reader), End::new(c, CELL_READER));
                    }
                    self.set_phase(WalkBack);
                }
                Some(GraphToken::Semicolon) => {
                    self.consume();
                    self.set_phase(ReadPath);
                }
                other => return Err(self.malformed(format!("expected a pair or ';', found {other:?}"))),
            },
            WalkBack => match self.head() {
                Some(GraphToken::Bar) => {
                    let Some(cell) = self.arm(Role::Reader) else {
                        return Err(self.malformed("dangling backtrack: more bars than DFS depth"));
                    };
                    let WorldLabel::Cell(step) = *self.label(cell) else {
                        return Err(self.malformed("reader is not on a stack cell"));
                    };
                    let v = self.arm(Role::Back).expect("back arm");
                    let up = self
                        .nb(v, step.into)
                        .filter(|e| e.port == step.out)
                        .ok_or_else(|| self.malformed("stack cell does not match the tree"))?;
                    self.consume();
                    self.move_arm(Role::Back, Some(up.vertex));
                    let below = self.nb(cell, CELL_DOWN).map(|e| e.vertex);
                    self.unlink(self.role(Role::Reader));
                    if let Some(b) = below {
                        self.link(self.role(Role::Reader), End::new(b, CELL_READER));
                    }
                }
                _ => self.set_phase(PlaceBackEdge),
            },
            PlaceBackEdge => {
                let (i, j) = self.buffer().expect("buffered pair");
                let l = last.expect("current vertex");
                let v = self.arm(Role::Back).expect("back arm");
                if self.nb(l, i).is_some() || self.nb(v, j).is_some() || (l == v && i == j) {
                    return Err(self.malformed(format!("port reuse placing ({i},{j})")));
                }
                self.link(End::new(l, i), End::new(v, j));
                self.set_buffer(None);
                self.move_arm(Role::Back, None);
                self.unlink(self.role(Role::Reader));
                self.set_phase(ReadBackEdge);
            }
            ReadPath => match self.head() {
                Some(GraphToken::Pair(s, t)) => {
                    self.check_ports(s, t)?;
                    if self.is_pending(last) {
                        return Err(self.malformed("path continues past the new vertex"));
                    }
                    self.consume();
                    self.set_buffer(Some((s, t)));
                    self.set_phase(ExtendPath);
                }
                _ => self.set_phase(ReadSeparator),
            },
            ExtendPath => {
                let (s, t) = self.buffer().expect("buffered pair");
                let l = last.expect("current vertex");
                match self.nb(l, s) {
                    Some(e) => {
                        let up = self
                            .top_cell()
                            .is_some_and(|(_, c)| c.into == s && c.out == t && e.port == t);
                        if !up {
                            return Err(self.malformed(format!("path step ({s},{t}) is not the way up the tree")));
                        }
                        self.pop();
                        self.move_arm(Role::Last, Some(e.vertex));
                    }
                    None => {
                        let n = self.add(WorldLabel::Pending);
                        self.link(End::new(l, s), End::new(n, t));
                        self.push(Step::new(s, t));
                        self.move_arm(Role::Last, Some(n));
                    }
                }
                self.set_buffer(None);
                self.set_phase(ReadPath);
            }
            Finish => {
                if self.top_cell().is_some() {
                    self.pop();
                } else {
                    for r in [Role::Tape, Role::Rule, Role::Buffer, Role::Reader] {
                        if let Some(v) = self.arm(r) {
                            if r == Role::Reader {
                                self.unlink(self.role(r));
                            } else {
                                self.delete(v);
                            }
                        }
                    }
                    self.move_arm(Role::Last, None);
                    self.move_arm(Role::Back, None);
                    self.delete(self.machine);
                }
            }
            Halted => unreachable!(),
        }
        Ok(())
    }

    fn rule_from_holder(&self) -> RuleRef {
        match self.arm(Role::Rule).map(|v| self.label(v)) {
            Some(WorldLabel::RuleHolder(r)) => r.clone(),
            _ => self.rule.clone(),
        }
    }

    /// The built graph after the machine has halted.
    pub fn built_graph(&self) -> Result<CayleyGraph<SimLabel>, UniversalError> {
        if self.phase() != MachinePhase::Halted {
            return Err(self.malformed("machine has not halted"));
        }
        let root = self.root.ok_or_else(|| self.malformed("nothing was built"))?;
        let c = canonical_from(self.ports, |v, p| self.nb(v, p), |v| self.label(v).clone(), root, None);
        if c.origin.len() != self.vertex_count() {
            return Err(self.malformed("leftover vertices after halting"));
        }
        let mut labels = Vec::with_capacity(c.origin.len());
        let mut adj = Vec::with_capacity(c.origin.len());
        for v in 0..c.graph.vertex_count() {
            let WorldLabel::Built(l) = c.graph.label(v) else {
                return Err(self.malformed(format!("vertex labelled {} left over", c.graph.label(v))));
            };
            labels.push(l.clone());
            if (self.sim_ports + 1..=self.ports).any(|p| c.graph.neighbor(v, p).is_some()) {
                return Err(self.malformed("edge left on a machine port"));
            }
            adj.push((1..=self.sim_ports).map(|p| c.graph.neighbor(v, p)).collect());
        }
        Ok(CayleyGraph::from_canonical_parts(self.sim_ports, labels, adj))
    }
}

/// One step on a copy of `w`.
pub fn machine_step(w: &MachineGraph) -> Result<(MachineGraph, TraceRecord), UniversalError> {
    let mut next = w.clone();
    let rec = next.step()?;
    Ok((next, rec))
}

/// Result of [`run_machine`].
#[derive(Clone, Debug)]
pub struct MachineRun {
    pub graph: CayleyGraph<SimLabel>,
    pub steps: usize,
    pub trace: Vec<TraceRecord>,
}

/// Steps `w` until it halts and returns what it built.
pub fn run_machine(mut w: MachineGraph, max_steps: usize) -> Result<MachineRun, UniversalError> {
    let mut trace = Vec::new();
    while w.phase() != MachinePhase::Halted {
        if w.steps() >= max_steps {
            return Err(UniversalError::BudgetExceeded { steps: max_steps });
        }
        trace.push(w.step()?);
    }
    Ok(MachineRun {
        graph: w.built_graph()?,
        steps: w.steps(),
        trace,
    })
}
