//! Morphology and controller models, the oscillator activation, and the
//! static descriptors computed from a developed robot.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::PI;

/// Absolute heading on the top-view grid. `North` is "up".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    North,
    East,
    South,
    West,
}

impl Direction {
    pub fn offset(self) -> (i32, i32) {
        match self {
            Direction::North => (0, 1),
            Direction::East => (1, 0),
            Direction::South => (0, -1),
            Direction::West => (-1, 0),
        }
    }

    fn quarter_turns(self) -> u8 {
        match self {
            Direction::North => 0,
            Direction::East => 1,
            Direction::South => 2,
            Direction::West => 3,
        }
    }

    fn from_quarter_turns(q: u8) -> Self {
        match q % 4 {
            0 => Direction::North,
            1 => Direction::East,
            2 => Direction::South,
            _ => Direction::West,
        }
    }

    /// Heading of the given slot of a module facing `self`.
    pub fn toward(self, slot: Slot) -> Direction {
        let turn = match slot {
            Slot::Front => 0,
            Slot::Right => 1,
            Slot::Back => 2,
            Slot::Left => 3,
        };
        Direction::from_quarter_turns(self.quarter_turns() + turn)
    }
}

/// Lateral slot of a module, relative to its own facing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Front,
    Right,
    Back,
    Left,
}

impl Slot {
    pub const ALL: [Slot; 4] = [Slot::Front, Slot::Right, Slot::Back, Slot::Left];

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModuleKind {
    Core,
    Brick,
    JointV,
    JointH,
    Sensor,
}

impl ModuleKind {
    pub fn is_joint(self) -> bool {
        matches!(self, ModuleKind::JointV | ModuleKind::JointH)
    }

    /// Slots that may hold a child module.
    pub fn child_slots(self) -> &'static [Slot] {
        match self {
            ModuleKind::Core => &Slot::ALL,
            ModuleKind::Brick => &[Slot::Front, Slot::Right, Slot::Left],
            ModuleKind::JointV | ModuleKind::JointH => &[Slot::Front],
            ModuleKind::Sensor => &[],
        }
    }

    pub fn letter(self) -> &'static str {
        match self {
            ModuleKind::Core => "C",
            ModuleKind::Brick => "B",
            ModuleKind::JointV => "A1",
            ModuleKind::JointH => "A2",
            ModuleKind::Sensor => "T",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModuleId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NeuronId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InputId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

pub type Cell = (i32, i32);

#[derive(Debug, Clone, PartialEq)]
pub struct Module {
    pub id: ModuleId,
    pub kind: ModuleKind,
    /// Parent module and the parent's slot this module hangs from.
    pub parent: Option<(ModuleId, Slot)>,
    pub cell: Cell,
    pub facing: Direction,
    children: [Option<ModuleId>; 4],
}

impl Module {
    pub fn child(&self, slot: Slot) -> Option<ModuleId> {
        self.children[slot.index()]
    }

    /// Child slots currently free.
    pub fn free_slots(&self) -> impl Iterator<Item = Slot> + '_ {
        self.kind
            .child_slots()
            .iter()
            .copied()
            .filter(|s| self.child(*s).is_none())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum AttachError {
    #[error("slot is not a free child slot of the parent")]
    SlotUnavailable,
    #[error("sensors cannot be attached to joints")]
    SensorOnJoint,
    #[error("cell {0:?} is already occupied")]
    Intersection(Cell),
}

/// A planar tree of modules rooted at the core, with its occupancy grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Morphology {
    modules: Vec<Module>,
    grid: BTreeMap<Cell, ModuleId>,
}

impl Morphology {
    /// A lone core at the origin, facing north.
    pub fn with_core() -> Self {
        let core = Module {
            id: ModuleId(0),
            kind: ModuleKind::Core,
            parent: None,
            cell: (0, 0),
            facing: Direction::North,
            children: [None; 4],
        };
        let mut grid = BTreeMap::new();
        grid.insert((0, 0), ModuleId(0));
        Self {
            modules: alloc::vec![core],
            grid,
        }
    }

    pub fn core(&self) -> ModuleId {
        ModuleId(0)
    }

    pub fn module(&self, id: ModuleId) -> &Module {
        &self.modules[id.0]
    }

    pub fn modules(&self) -> &[Module] {
        &self.modules
    }

    pub fn grid(&self) -> &BTreeMap<Cell, ModuleId> {
        &self.grid
    }

    pub fn size(&self) -> usize {
        self.modules.len()
    }

    pub fn count(&self, kind: ModuleKind) -> usize {
        self.modules.iter().filter(|m| m.kind == kind).count()
    }

    /// Cell a child would occupy at `slot` of `parent`.
    pub fn cell_at(&self, parent: ModuleId, slot: Slot) -> Cell {
        let p = self.module(parent);
        let (dx, dy) = p.facing.toward(slot).offset();
        (p.cell.0 + dx, p.cell.1 + dy)
    }

    /// Mounts a new module at `slot` of `parent`.
    pub fn attach(&mut self, parent: ModuleId, slot: Slot, kind: ModuleKind) -> Result<ModuleId, AttachError> {
        let p = self.module(parent);
        if !p.kind.child_slots().contains(&slot) || p.child(slot).is_some() {
            return Err(AttachError::SlotUnavailable);
        }
        if kind == ModuleKind::Sensor && p.kind.is_joint() {
            return Err(AttachError::SensorOnJoint);
        }
        let cell = self.cell_at(parent, slot);
        if self.grid.contains_key(&cell) {
            return Err(AttachError::Intersection(cell));
        }
        let facing = p.facing.toward(slot);
        let id = ModuleId(self.modules.len());
        self.modules.push(Module {
            id,
            kind,
            parent: Some((parent, slot)),
            cell,
            facing,
            children: [None; 4],
        });
        self.modules[parent.0].children[slot.index()] = Some(id);
        self.grid.insert(cell, id);
        Ok(id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JointAxis {
    Vertical,
    Horizontal,
}

/// Oscillator node driving one joint.
#[derive(Debug, Clone, PartialEq)]
pub struct Neuron {
    pub module: ModuleId,
    pub axis: JointAxis,
    /// Connection weight carried by the node.
    pub weight: f64,
    pub amplitude: f64,
    pub period: f64,
    pub offset: f64,
    /// Weight of the recurrent self-edge, if any.
    pub recurrent: Option<f64>,
    edges: Vec<EdgeId>,
}

impl Neuron {
    /// Edges in serial order; serial `n` is `edges()[n - 1]`.
    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }
}

/// Sensor input node.
#[derive(Debug, Clone, PartialEq)]
pub struct Input {
    pub module: ModuleId,
    pub weight: f64,
    edges: Vec<EdgeId>,
}

impl Input {
    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }
}

/// Weighted input-to-neuron link with its serial number at each endpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub input: InputId,
    pub neuron: NeuronId,
    pub weight: f64,
    pub input_serial: usize,
    pub neuron_serial: usize,
}

/// Bipartite controller: inputs connect only to oscillators.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ControllerNetwork {
    inputs: Vec<Input>,
    neurons: Vec<Neuron>,
    edges: Vec<Edge>,
}

impl ControllerNetwork {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn inputs(&self) -> &[Input] {
        &self.inputs
    }

    pub fn neurons(&self) -> &[Neuron] {
        &self.neurons
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn input(&self, id: InputId) -> &Input {
        &self.inputs[id.0]
    }

    pub fn neuron(&self, id: NeuronId) -> &Neuron {
        &self.neurons[id.0]
    }

    pub fn neuron_mut(&mut self, id: NeuronId) -> &mut Neuron {
        &mut self.neurons[id.0]
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id.0]
    }

    pub fn edge_mut(&mut self, id: EdgeId) -> &mut Edge {
        &mut self.edges[id.0]
    }

    pub fn add_neuron(
        &mut self,
        module: ModuleId,
        axis: JointAxis,
        weight: f64,
        amplitude: f64,
        period: f64,
        offset: f64,
    ) -> NeuronId {
        let id = NeuronId(self.neurons.len());
        self.neurons.push(Neuron {
            module,
            axis,
            weight,
            amplitude,
            period,
            offset,
            recurrent: None,
            edges: Vec::new(),
        });
        id
    }

    pub fn add_input(&mut self, module: ModuleId, weight: f64) -> InputId {
        let id = InputId(self.inputs.len());
        self.inputs.push(Input {
            module,
            weight,
            edges: Vec::new(),
        });
        id
    }

    pub fn edge_between(&self, input: InputId, neuron: NeuronId) -> Option<EdgeId> {
        self.inputs[input.0]
            .edges
            .iter()
            .copied()
            .find(|e| self.edges[e.0].neuron == neuron)
    }

    /// Links `input` and `neuron`; `None` if they are already linked.
    pub fn connect(&mut self, input: InputId, neuron: NeuronId, weight: f64) -> Option<EdgeId> {
        if self.edge_between(input, neuron).is_some() {
            return None;
        }
        let id = EdgeId(self.edges.len());
        let input_serial = self.inputs[input.0].edges.len() + 1;
        let neuron_serial = self.neurons[neuron.0].edges.len() + 1;
        self.edges.push(Edge {
            input,
            neuron,
            weight,
            input_serial,
            neuron_serial,
        });
        self.inputs[input.0].edges.push(id);
        self.neurons[neuron.0].edges.push(id);
        Some(id)
    }

    pub fn recurrent_count(&self) -> usize {
        self.neurons.iter().filter(|n| n.recurrent.is_some()).count()
    }
}

/// A developed robot.
#[derive(Debug, Clone, PartialEq)]
pub struct Phenotype {
    pub morphology: Morphology,
    pub controller: ControllerNetwork,
}

/// Sine oscillator output for amplitude `a`, period `p`, phase offset `o`
/// at time `t`:
///
/// `O = 0.5 - a/2 + (sin(2π/p · (t - p·o)) + 1)/2 · a`
///
/// A zero period is degenerate and yields the neutral value 0.5.
pub fn oscillator_output(a: f64, p: f64, o: f64, t: f64) -> f64 {
    if p == 0.0 {
        log::debug!("degenerate oscillator with zero period");
        return 0.5;
    }
    let s = libm::sin(2.0 * PI / p * (t - p * o));
    0.5 - a / 2.0 + (s + 1.0) / 2.0 * a
}

/// Number of modules.
pub fn descriptor_size(m: &Morphology) -> usize {
    m.size()
}

/// Sensor count over the slots not connected to other module types:
/// slots holding sensors plus free slots of the core and bricks.
pub fn descriptor_sensors(m: &Morphology) -> f64 {
    let sensors = m.count(ModuleKind::Sensor);
    let free: usize = m
        .modules()
        .iter()
        .filter(|md| matches!(md.kind, ModuleKind::Core | ModuleKind::Brick))
        .map(|md| md.free_slots().count())
        .sum();
    let c_max = sensors + free;
    if c_max == 0 {
        0.0
    } else {
        sensors as f64 / c_max as f64
    }
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

/// Median over inputs of (input degree / oscillator count).
pub fn descriptor_sensors_reach(n: &ControllerNetwork) -> f64 {
    let oscillators = n.neurons().len();
    if n.inputs().is_empty() || oscillators == 0 {
        log::debug!("sensors reach undefined without inputs or oscillators");
        return 0.0;
    }
    let mut ratios: Vec<f64> = n
        .inputs()
        .iter()
        .map(|i| i.edges().len() as f64 / oscillators as f64)
        .collect();
    median(&mut ratios)
}

/// Fraction of oscillators with a recurrent edge.
pub fn descriptor_recurrence(n: &ControllerNetwork) -> f64 {
    let oscillators = n.neurons().len();
    if oscillators == 0 {
        log::debug!("recurrence undefined without oscillators");
        return 0.0;
    }
    n.recurrent_count() as f64 / oscillators as f64
}
