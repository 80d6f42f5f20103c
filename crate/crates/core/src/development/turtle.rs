//! Late development: a single left-to-right turtle pass turning the
//! rewritten string into a morphology and its controller.

use alloc::vec::Vec;
use core::fmt;

use crate::phenotype::{
    AttachError, ControllerNetwork, InputId, JointAxis, ModuleId, ModuleKind, Morphology, NeuronId, Phenotype,
    Slot,
};
use super::DevelopmentConfig;
use crate::symbol::{Category, SymbolInstance, SymbolKind};

/// Why a symbol left no mark on the phenotype.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Unexpressed {
    /// A module arrived with an empty slot reference.
    NoSlotReference,
    /// The module cap was already reached.
    ModuleLimit,
    /// The target slot is taken or does not exist on the reference module.
    SlotOccupied,
    SensorOnJoint,
    /// The new module would overlap an existing one.
    Intersection,
    /// A later mounting command replaced this one before it was used.
    Overwritten,
    /// No module behind the requested slot.
    NoModuleThere,
    NoInputReference,
    NoNeuronReference,
    /// The reference node has no edges to hop along.
    NoEdges,
    EdgeExists,
    LoopExists,
    /// No edge between the input and neuron references.
    NoEdge,
    /// A core symbol after the first.
    ExtraCore,
}

impl fmt::Display for Unexpressed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Unexpressed::NoSlotReference => "empty slot reference",
            Unexpressed::ModuleLimit => "module limit reached",
            Unexpressed::SlotOccupied => "slot occupied",
            Unexpressed::SensorOnJoint => "sensor on joint",
            Unexpressed::Intersection => "intersects existing module",
            Unexpressed::Overwritten => "slot reference overwritten",
            Unexpressed::NoModuleThere => "no module in that slot",
            Unexpressed::NoInputReference => "no input reference",
            Unexpressed::NoNeuronReference => "no neuron reference",
            Unexpressed::NoEdges => "reference node has no edges",
            Unexpressed::EdgeExists => "edge already exists",
            Unexpressed::LoopExists => "loop already exists",
            Unexpressed::NoEdge => "no edge between references",
            Unexpressed::ExtraCore => "extra core",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Expressed,
    NotExpressed(Unexpressed),
}

/// Development decision for one symbol of the string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub index: usize,
    pub symbol: SymbolKind,
    pub outcome: Outcome,
}

impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.outcome {
            Outcome::Expressed => write!(f, "{:>4} {:<12} expressed", self.index, self.symbol.name()),
            Outcome::NotExpressed(why) => {
                write!(f, "{:>4} {:<12} not expressed: {}", self.index, self.symbol.name(), why)
            }
        }
    }
}

/// Positional references kept while interpreting the string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TurtleState {
    pub module_reference: ModuleId,
    /// Pending mounting slot and the string index of the command that set it.
    pub slot_reference: Option<(Slot, usize)>,
    pub neuron_reference: Option<NeuronId>,
    pub input_reference: Option<InputId>,
    /// Neurons created while no input exists yet.
    pub pending_neurons: Vec<NeuronId>,
    /// Inputs created while no neuron exists yet.
    pub pending_inputs: Vec<InputId>,
}

impl TurtleState {
    fn new(core: ModuleId) -> Self {
        Self {
            module_reference: core,
            slot_reference: None,
            neuron_reference: None,
            input_reference: None,
            pending_neurons: Vec::new(),
            pending_inputs: Vec::new(),
        }
    }

    /// Neuron targeted by controller-changing commands: the top of the
    /// pending stack if there is one, else the neuron reference.
    fn active_neuron(&self) -> Option<NeuronId> {
        self.pending_neurons.last().copied().or(self.neuron_reference)
    }

    fn active_input(&self) -> Option<InputId> {
        self.pending_inputs.last().copied().or(self.input_reference)
    }
}

/// Result of late development.
#[derive(Debug, Clone, PartialEq)]
pub struct LateDevelopment {
    pub phenotype: Phenotype,
    pub trace: Vec<TraceEntry>,
    pub turtle: TurtleState,
}

fn mount_slot(kind: SymbolKind) -> Slot {
    match kind {
        SymbolKind::AddRight => Slot::Right,
        SymbolKind::AddLeft => Slot::Left,
        _ => Slot::Front,
    }
}

fn move_slot(kind: SymbolKind) -> Slot {
    match kind {
        SymbolKind::MoveBack => Slot::Back,
        SymbolKind::MoveRight => Slot::Right,
        SymbolKind::MoveLeft => Slot::Left,
        _ => Slot::Front,
    }
}

fn hops(v: f64, available: usize) -> usize {
    let t = libm::ceil(libm::fabs(v)) as usize;
    t.clamp(1, available)
}

struct Builder {
    morphology: Morphology,
    controller: ControllerNetwork,
    turtle: TurtleState,
    trace: Vec<TraceEntry>,
    max_modules: usize,
    weight: (f64, f64),
    oscillator_max: f64,
}

impl Builder {
    fn clamp_weight(&self, w: f64) -> f64 {
        w.clamp(self.weight.0, self.weight.1)
    }

    fn mount(&mut self, sym: &SymbolInstance) -> Outcome {
        use Outcome::NotExpressed as No;
        if self.morphology.size() >= self.max_modules {
            return No(Unexpressed::ModuleLimit);
        }
        let Some((requested, _)) = self.turtle.slot_reference else {
            return No(Unexpressed::NoSlotReference);
        };
        let parent = self.turtle.module_reference;
        let pm = self.morphology.module(parent);
        let slot = if pm.kind.is_joint() {
            Slot::Front
        } else if pm.kind == ModuleKind::Core
            && [Slot::Left, Slot::Front, Slot::Right]
                .iter()
                .all(|s| pm.child(*s).is_some())
        {
            Slot::Back
        } else {
            requested
        };
        let kind = match sym.kind {
            SymbolKind::Brick => ModuleKind::Brick,
            SymbolKind::JointV => ModuleKind::JointV,
            SymbolKind::JointH => ModuleKind::JointH,
            SymbolKind::Sensor => ModuleKind::Sensor,
            _ => unreachable!("mount called with {}", sym.kind),
        };
        match self.morphology.attach(parent, slot, kind) {
            Err(AttachError::SlotUnavailable) => No(Unexpressed::SlotOccupied),
            Err(AttachError::SensorOnJoint) => No(Unexpressed::SensorOnJoint),
            Err(AttachError::Intersection(_)) => {
                self.turtle.slot_reference = None;
                No(Unexpressed::Intersection)
            }
            Ok(id) => {
                self.turtle.slot_reference = None;
                match kind {
                    ModuleKind::JointV | ModuleKind::JointH => self.new_neuron(id, kind, sym),
                    ModuleKind::Sensor => self.new_input(id, sym),
                    _ => {}
                }
                Outcome::Expressed
            }
        }
    }

    fn new_neuron(&mut self, module: ModuleId, kind: ModuleKind, sym: &SymbolInstance) {
        let axis = if kind == ModuleKind::JointV {
            JointAxis::Vertical
        } else {
            JointAxis::Horizontal
        };
        let w = self.clamp_weight(sym.param(0));
        let hi = self.oscillator_max;
        let osc = |i: usize| sym.param(i).clamp(0.0, hi);
        let n = self.controller.add_neuron(module, axis, w, osc(1), osc(2), osc(3));
        let t = &mut self.turtle;
        if let Some(&top) = t.pending_inputs.last() {
            for &i in &t.pending_inputs {
                let weight = if i == top { w } else { self.controller.input(i).weight };
                self.controller.connect(i, n, weight);
            }
            t.pending_inputs.clear();
            t.input_reference = Some(top);
            t.neuron_reference = Some(n);
        } else if let Some(i) = t.input_reference {
            self.controller.connect(i, n, w);
            t.neuron_reference = Some(n);
        } else {
            t.pending_neurons.push(n);
            t.neuron_reference.get_or_insert(n);
        }
    }

    fn new_input(&mut self, module: ModuleId, sym: &SymbolInstance) {
        let w = self.clamp_weight(sym.param(0));
        let i = self.controller.add_input(module, w);
        let t = &mut self.turtle;
        if let Some(&top) = t.pending_neurons.last() {
            for &n in &t.pending_neurons {
                let weight = if n == top { w } else { self.controller.neuron(n).weight };
                self.controller.connect(i, n, weight);
            }
            t.pending_neurons.clear();
            t.neuron_reference = Some(top);
            t.input_reference = Some(i);
        } else if let Some(n) = t.neuron_reference {
            self.controller.connect(i, n, w);
            t.input_reference = Some(i);
        } else {
            t.pending_inputs.push(i);
            t.input_reference.get_or_insert(i);
        }
    }

    fn set_slot(&mut self, index: usize, kind: SymbolKind) -> Outcome {
        if let Some((_, previous)) = self.turtle.slot_reference {
            self.trace[previous].outcome = Outcome::NotExpressed(Unexpressed::Overwritten);
        }
        self.turtle.slot_reference = Some((mount_slot(kind), index));
        Outcome::Expressed
    }

    fn move_module(&mut self, kind: SymbolKind) -> Outcome {
        let current = self.morphology.module(self.turtle.module_reference);
        let target = if current.kind.is_joint() {
            current.child(Slot::Front)
        } else {
            match move_slot(kind) {
                Slot::Back if current.kind != ModuleKind::Core => current.parent.map(|(p, _)| p),
                slot => current.child(slot),
            }
        };
        match target {
            Some(id) => {
                self.turtle.module_reference = id;
                Outcome::Expressed
            }
            None => Outcome::NotExpressed(Unexpressed::NoModuleThere),
        }
    }

    fn move_controller(&mut self, sym: &SymbolInstance) -> Outcome {
        use Outcome::NotExpressed as No;
        let net = &self.controller;
        match sym.kind {
            SymbolKind::MoveRefI => {
                let Some(start) = self.turtle.input_reference else {
                    return No(Unexpressed::NoInputReference);
                };
                let edges = net.input(start).edges();
                if edges.is_empty() {
                    return No(Unexpressed::NoEdges);
                }
                let temp = net.edge(edges[hops(sym.param(0), edges.len()) - 1]).neuron;
                let back = net.neuron(temp).edges();
                let definite = net.edge(back[hops(sym.param(1), back.len()) - 1]).input;
                self.turtle.input_reference = Some(definite);
            }
            _ => {
                let Some(start) = self.turtle.neuron_reference else {
                    return No(Unexpressed::NoNeuronReference);
                };
                let edges = net.neuron(start).edges();
                if edges.is_empty() {
                    return No(Unexpressed::NoEdges);
                }
                let temp = net.edge(edges[hops(sym.param(0), edges.len()) - 1]).input;
                let back = net.input(temp).edges();
                let definite = net.edge(back[hops(sym.param(1), back.len()) - 1]).neuron;
                self.turtle.neuron_reference = Some(definite);
            }
        }
        Outcome::Expressed
    }

    fn change_controller(&mut self, sym: &SymbolInstance) -> Outcome {
        use Outcome::NotExpressed as No;
        let v = sym.param(0);
        let (wl, wh) = self.weight;
        let hi = self.oscillator_max;
        let neuron = self.turtle.active_neuron();
        let input = self.turtle.active_input();
        match sym.kind {
            SymbolKind::AddEdge | SymbolKind::MutateEdge => {
                let (Some(i), Some(n)) = (input, neuron) else {
                    return No(if input.is_none() {
                        Unexpressed::NoInputReference
                    } else {
                        Unexpressed::NoNeuronReference
                    });
                };
                if sym.kind == SymbolKind::AddEdge {
                    match self.controller.connect(i, n, v.clamp(wl, wh)) {
                        Some(_) => Outcome::Expressed,
                        None => No(Unexpressed::EdgeExists),
                    }
                } else {
                    match self.controller.edge_between(i, n) {
                        Some(e) => {
                            let edge = self.controller.edge_mut(e);
                            edge.weight = (edge.weight + v).clamp(wl, wh);
                            Outcome::Expressed
                        }
                        None => No(Unexpressed::NoEdge),
                    }
                }
            }
            _ => {
                let Some(n) = neuron else {
                    return No(Unexpressed::NoNeuronReference);
                };
                let node = self.controller.neuron_mut(n);
                match sym.kind {
                    SymbolKind::Loop if node.recurrent.is_some() => return No(Unexpressed::LoopExists),
                    SymbolKind::Loop => node.recurrent = Some(v.clamp(wl, wh)),
                    SymbolKind::MutateAmp => node.amplitude = (node.amplitude + v).clamp(0.0, hi),
                    SymbolKind::MutatePer => node.period = (node.period + v).clamp(0.0, hi),
                    _ => node.offset = (node.offset + v).clamp(0.0, hi),
                }
                Outcome::Expressed
            }
        }
    }
}

/// Interprets a rewritten string into a phenotype, recording one trace
/// entry per symbol.
///
/// The core is created at the grid origin facing north whatever the
/// string holds; every later core symbol is left unexpressed.
pub fn late_develop(symbols: &[SymbolInstance], cfg: &DevelopmentConfig) -> LateDevelopment {
    let morphology = Morphology::with_core();
    let core = morphology.core();
    let mut b = Builder {
        morphology,
        controller: ControllerNetwork::new(),
        turtle: TurtleState::new(core),
        trace: Vec::with_capacity(symbols.len()),
        max_modules: cfg.max_modules,
        weight: cfg.ranges.weight,
        oscillator_max: cfg.ranges.oscillator.1,
    };
    for (index, sym) in symbols.iter().enumerate() {
        let outcome = match sym.kind.category() {
            Category::Module if sym.kind == SymbolKind::Core => {
                if index == 0 {
                    Outcome::Expressed
                } else {
                    Outcome::NotExpressed(Unexpressed::ExtraCore)
                }
            }
            Category::Module => b.mount(sym),
            Category::MorphMount => b.set_slot(index, sym.kind),
            Category::MorphMove => b.move_module(sym.kind),
            Category::CtrlMove => b.move_controller(sym),
            Category::CtrlChange => b.change_controller(sym),
        };
        b.trace.push(TraceEntry {
            index,
            symbol: sym.kind,
            outcome,
        });
    }
    LateDevelopment {
        phenotype: Phenotype {
            morphology: b.morphology,
            controller: b.controller,
        },
        trace: b.trace,
        turtle: b.turtle,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use SymbolKind::*;

    fn s(k: SymbolKind) -> SymbolInstance {
        SymbolInstance::bare(k)
    }

    fn joint(k: SymbolKind, w: f64) -> SymbolInstance {
        SymbolInstance::new(k, vec![w, 2.0, 4.0, 0.0]).unwrap()
    }

    fn sensor(w: f64) -> SymbolInstance {
        SymbolInstance::new(Sensor, vec![w]).unwrap()
    }

    fn ctrl(k: SymbolKind, v: f64) -> SymbolInstance {
        SymbolInstance::new(k, vec![v]).unwrap()
    }

    fn outcomes(d: &LateDevelopment) -> Vec<Outcome> {
        d.trace.iter().map(|t| t.outcome).collect()
    }

    #[test]
    fn mount_needs_a_slot_reference() {
        let d = late_develop(&[s(Core), s(AddFront), s(Brick)], &DevelopmentConfig::default());
        assert_eq!(d.phenotype.morphology.size(), 2);
        let d = late_develop(&[s(Core), s(Brick)], &DevelopmentConfig::default());
        assert_eq!(d.phenotype.morphology.size(), 1);
        assert_eq!(d.trace[1].outcome, Outcome::NotExpressed(Unexpressed::NoSlotReference));
    }

    #[test]
    fn module_limit_caps_size() {
        let mut symbols = vec![s(Core)];
        for _ in 0..20 {
            symbols.extend([s(AddFront), s(Brick), s(MoveFront)]);
        }
        let d = late_develop(&symbols, &DevelopmentConfig::default());
        assert_eq!(d.phenotype.morphology.size(), 15);
        assert!(d
            .trace
            .iter()
            .any(|t| t.outcome == Outcome::NotExpressed(Unexpressed::ModuleLimit)));
    }

    #[test]
    fn sensor_cannot_sit_on_a_joint() {
        let d = late_develop(&[s(Core), s(AddFront), joint(JointV, 0.5), s(MoveFront), s(AddFront), sensor(0.5)], &DevelopmentConfig::default());
        assert_eq!(d.phenotype.morphology.size(), 2);
        assert_eq!(d.trace[5].outcome, Outcome::NotExpressed(Unexpressed::SensorOnJoint));
        // slot reference survives the failed mount
        assert!(d.turtle.slot_reference.is_some());
    }

    #[test]
    fn occupied_slot_and_overwritten_reference() {
        let d = late_develop(
            &[s(Core), s(AddLeft), s(AddRight), s(Brick), s(AddRight), s(Brick)],
            &DevelopmentConfig::default(),
        );
        let o = outcomes(&d);
        assert_eq!(o[1], Outcome::NotExpressed(Unexpressed::Overwritten));
        assert_eq!(o[3], Outcome::Expressed);
        assert_eq!(o[5], Outcome::NotExpressed(Unexpressed::SlotOccupied));
        assert_eq!(d.phenotype.morphology.size(), 2);
    }

    #[test]
    fn extra_core_is_ignored() {
        let d = late_develop(&[s(Core), s(AddFront), s(Core)], &DevelopmentConfig::default());
        assert_eq!(d.phenotype.morphology.size(), 1);
        assert_eq!(d.trace[2].outcome, Outcome::NotExpressed(Unexpressed::ExtraCore));
    }

    #[test]
    fn moves_follow_the_tree() {
        let d = late_develop(
            &[s(Core), s(AddLeft), s(Brick), s(MoveLeft), s(MoveBack), s(MoveRight)],
            &DevelopmentConfig::default(),
        );
        let o = outcomes(&d);
        assert_eq!(o[3], Outcome::Expressed);
        assert_eq!(o[4], Outcome::Expressed);
        assert_eq!(o[5], Outcome::NotExpressed(Unexpressed::NoModuleThere));
        assert_eq!(d.turtle.module_reference, d.phenotype.morphology.core());
    }

    #[test]
    fn controller_commands_need_references() {
        let d = late_develop(&[s(Core), ctrl(Loop, 0.5), ctrl(AddEdge, 0.5)], &DevelopmentConfig::default());
        assert_eq!(d.trace[1].outcome, Outcome::NotExpressed(Unexpressed::NoNeuronReference));
        assert_eq!(d.trace[2].outcome, Outcome::NotExpressed(Unexpressed::NoInputReference));
    }

    #[test]
    fn sensor_then_joint_are_wired_once() {
        let d = late_develop(
            &[
                s(Core),
                s(AddLeft),
                sensor(0.3),
                s(AddFront),
                joint(JointH, 0.7),
                ctrl(AddEdge, 0.1),
                ctrl(Loop, 2.0),
                ctrl(Loop, 0.5),
                ctrl(MutateEdge, 1.0),
            ],
            &DevelopmentConfig::default(),
        );
        let net = &d.phenotype.controller;
        assert_eq!(net.inputs().len(), 1);
        assert_eq!(net.neurons().len(), 1);
        assert_eq!(net.edges().len(), 1);
        assert_eq!(net.edges()[0].weight, 1.0);
        assert_eq!(net.neurons()[0].recurrent, Some(1.0));
        let o = outcomes(&d);
        assert_eq!(o[5], Outcome::NotExpressed(Unexpressed::EdgeExists));
        assert_eq!(o[7], Outcome::NotExpressed(Unexpressed::LoopExists));
        assert_eq!(o[8], Outcome::Expressed);
    }

    #[test]
    fn pending_joints_connect_to_the_next_sensor() {
        let d = late_develop(
            &[
                s(Core),
                s(AddLeft),
                joint(JointV, 0.2),
                s(AddRight),
                joint(JointH, 0.4),
                s(AddFront),
                s(Brick),
                s(MoveFront),
                s(AddLeft),
                sensor(-0.5),
            ],
            &DevelopmentConfig::default(),
        );
        let net = &d.phenotype.controller;
        assert_eq!(net.neurons().len(), 2);
        assert_eq!(net.edges().len(), 2);
        let weights: Vec<f64> = net.edges().iter().map(|e| e.weight).collect();
        assert_eq!(weights, vec![0.2, -0.5]);
        assert!(d.turtle.pending_neurons.is_empty());
    }
}
