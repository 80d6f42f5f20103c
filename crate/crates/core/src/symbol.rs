//! The grammar alphabet: module symbols, mounting/moving commands and
//! controller commands, together with their sampled parameters.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::rng::RandomStream;

/// Symbol categories of the alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    Module,
    MorphMount,
    MorphMove,
    CtrlMove,
    CtrlChange,
}

impl Category {
    pub const ALL: [Category; 5] = [
        Category::Module,
        Category::MorphMount,
        Category::MorphMove,
        Category::CtrlMove,
        Category::CtrlChange,
    ];

    /// Order in which one initialization group draws its five symbols.
    pub const GROUP_ORDER: [Category; 5] = [
        Category::CtrlMove,
        Category::CtrlChange,
        Category::MorphMount,
        Category::Module,
        Category::MorphMove,
    ];

    /// Members of the category, in declaration order.
    pub fn members(self) -> &'static [SymbolKind] {
        use SymbolKind::*;
        match self {
            Category::Module => &[Core, Brick, JointV, JointH, Sensor],
            Category::MorphMount => &[AddRight, AddFront, AddLeft],
            Category::MorphMove => &[MoveBack, MoveRight, MoveFront, MoveLeft],
            Category::CtrlMove => &[MoveRefI, MoveRefN],
            Category::CtrlChange => &[AddEdge, Loop, MutateEdge, MutateAmp, MutatePer, MutateOff],
        }
    }

    /// Members that may be drawn at random. The core symbol is never drawn.
    pub fn drawable(self) -> &'static [SymbolKind] {
        match self {
            Category::Module => &self.members()[1..],
            _ => self.members(),
        }
    }
}

/// Every symbol of the alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    /// Core component, the axiom.
    Core,
    Brick,
    /// Joint on the vertical axis.
    JointV,
    /// Joint on the horizontal axis.
    JointH,
    /// Touch sensor.
    Sensor,
    AddRight,
    AddFront,
    AddLeft,
    MoveBack,
    MoveRight,
    MoveFront,
    MoveLeft,
    MoveRefI,
    MoveRefN,
    AddEdge,
    Loop,
    MutateEdge,
    MutateAmp,
    MutatePer,
    MutateOff,
}

impl SymbolKind {
    pub const ALL: [SymbolKind; 20] = {
        use SymbolKind::*;
        [
            Core, Brick, JointV, JointH, Sensor, AddRight, AddFront, AddLeft, MoveBack, MoveRight,
            MoveFront, MoveLeft, MoveRefI, MoveRefN, AddEdge, Loop, MutateEdge, MutateAmp,
            MutatePer, MutateOff,
        ]
    };

    /// The replaceable symbols, in canonical rule order.
    pub const REPLACEABLE: [SymbolKind; 5] = [
        SymbolKind::Core,
        SymbolKind::Brick,
        SymbolKind::JointV,
        SymbolKind::JointH,
        SymbolKind::Sensor,
    ];

    pub fn category(self) -> Category {
        use SymbolKind::*;
        match self {
            Core | Brick | JointV | JointH | Sensor => Category::Module,
            AddRight | AddFront | AddLeft => Category::MorphMount,
            MoveBack | MoveRight | MoveFront | MoveLeft => Category::MorphMove,
            MoveRefI | MoveRefN => Category::CtrlMove,
            AddEdge | Loop | MutateEdge | MutateAmp | MutatePer | MutateOff => Category::CtrlChange,
        }
    }

    pub fn is_replaceable(self) -> bool {
        self.category() == Category::Module
    }

    /// Index into [`SymbolKind::REPLACEABLE`], if replaceable.
    pub fn replaceable_index(self) -> Option<usize> {
        SymbolKind::REPLACEABLE.iter().position(|&k| k == self)
    }

    /// Number of numeric parameters carried by an instance of this symbol.
    pub fn param_count(self) -> usize {
        use SymbolKind::*;
        match self {
            JointV | JointH => 4,
            Sensor => 1,
            MoveRefI | MoveRefN => 2,
            AddEdge | Loop | MutateEdge | MutateAmp | MutatePer | MutateOff => 1,
            _ => 0,
        }
    }

    pub fn name(self) -> &'static str {
        use SymbolKind::*;
        match self {
            Core => "C",
            Brick => "B",
            JointV => "A1",
            JointH => "A2",
            Sensor => "T",
            AddRight => "add_right",
            AddFront => "add_front",
            AddLeft => "add_left",
            MoveBack => "move_back",
            MoveRight => "move_right",
            MoveFront => "move_front",
            MoveLeft => "move_left",
            MoveRefI => "move_ref_I",
            MoveRefN => "move_ref_N",
            AddEdge => "add_edge",
            Loop => "loop",
            MutateEdge => "mutate_edge",
            MutateAmp => "mutate_amp",
            MutatePer => "mutate_per",
            MutateOff => "mutate_off",
        }
    }

    /// Samples a fresh parameter vector for this symbol.
    ///
    /// Weights and oscillator amplitude/period/offset are uniform over
    /// their ranges; hop samples and perturbation operands are standard
    /// normal.
    pub fn sample_params(self, ranges: &ParamRanges, rng: &mut RandomStream) -> Vec<f64> {
        use SymbolKind::*;
        let (wl, wh) = ranges.weight;
        let (ol, oh) = ranges.oscillator;
        match self {
            JointV | JointH => {
                let w = rng.uniform(wl, wh);
                let a = rng.uniform(ol, oh);
                let p = rng.uniform(ol, oh);
                let o = rng.uniform(ol, oh);
                alloc::vec![w, a, p, o]
            }
            Sensor | AddEdge | Loop => alloc::vec![rng.uniform(wl, wh)],
            MoveRefI | MoveRefN => alloc::vec![rng.standard_normal(), rng.standard_normal()],
            MutateEdge | MutateAmp | MutatePer | MutateOff => alloc::vec![rng.standard_normal()],
            _ => Vec::new(),
        }
    }
}

/// Ranges of connection weights and oscillator parameters.
///
/// Fresh symbols sample from them; development clamps weights to
/// `weight` and oscillator parameters to `[0, oscillator.1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamRanges {
    pub weight: (f64, f64),
    pub oscillator: (f64, f64),
}

impl Default for ParamRanges {
    fn default() -> Self {
        Self {
            weight: (-1.0, 1.0),
            oscillator: (1.0, 10.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid {name} range [{lo}, {hi}]")]
pub struct ParamRangeError {
    pub name: &'static str,
    pub lo: f64,
    pub hi: f64,
}

impl ParamRanges {
    pub fn validate(&self) -> Result<(), ParamRangeError> {
        for (name, (lo, hi), floor) in [
            ("weight", self.weight, f64::NEG_INFINITY),
            ("oscillator", self.oscillator, 0.0),
        ] {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi && lo >= floor) {
                return Err(ParamRangeError { name, lo, hi });
            }
        }
        Ok(())
    }
}

impl fmt::Display for SymbolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Error for an unrecognized symbol name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownSymbol;

impl FromStr for SymbolKind {
    type Err = UnknownSymbol;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SymbolKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or(UnknownSymbol)
    }
}

/// One alphabet token together with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolInstance {
    pub kind: SymbolKind,
    pub params: Vec<f64>,
}

impl SymbolInstance {
    /// Builds an instance, checking the parameter count.
    pub fn new(kind: SymbolKind, params: Vec<f64>) -> Option<Self> {
        (params.len() == kind.param_count()).then_some(Self { kind, params })
    }

    /// Instance of a parameterless symbol.
    ///
    /// # Panics
    /// If `kind` carries parameters.
    pub fn bare(kind: SymbolKind) -> Self {
        assert_eq!(kind.param_count(), 0, "{kind} carries parameters");
        Self {
            kind,
            params: Vec::new(),
        }
    }

    pub fn random(kind: SymbolKind, ranges: &ParamRanges, rng: &mut RandomStream) -> Self {
        Self {
            kind,
            params: kind.sample_params(ranges, rng),
        }
    }

    pub fn param(&self, i: usize) -> f64 {
        self.params[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_tag_has_exactly_one_category() {
        for cat in Category::ALL {
            for k in cat.members() {
                assert_eq!(k.category(), cat);
            }
        }
        let total: usize = Category::ALL.iter().map(|c| c.members().len()).sum();
        assert_eq!(total, SymbolKind::ALL.len());
    }

    #[test]
    fn module_tags_are_the_replaceable_set() {
        let replaceable: Vec<_> = SymbolKind::ALL
            .iter()
            .copied()
            .filter(|k| k.is_replaceable())
            .collect();
        assert_eq!(replaceable, SymbolKind::REPLACEABLE.to_vec());
        assert_eq!(Category::Module.members().len(), 5);
    }

    #[test]
    fn core_is_never_drawable() {
        for cat in Category::ALL {
            assert!(!cat.drawable().contains(&SymbolKind::Core));
        }
        assert_eq!(Category::Module.drawable().len(), 4);
    }

    #[test]
    fn names_round_trip() {
        for k in SymbolKind::ALL {
            assert_eq!(k.name().parse::<SymbolKind>(), Ok(k));
        }
        assert!("X".parse::<SymbolKind>().is_err());
    }

    #[test]
    fn sampled_params_respect_ranges() {
        let mut rng = RandomStream::new(3);
        for _ in 0..2000 {
            for k in SymbolKind::ALL {
                let s = SymbolInstance::random(k, &ParamRanges::default(), &mut rng);
                assert_eq!(s.params.len(), k.param_count());
                match k {
                    SymbolKind::JointV | SymbolKind::JointH => {
                        assert!((-1.0..=1.0).contains(&s.params[0]));
                        for v in &s.params[1..] {
                            assert!((1.0..=10.0).contains(v));
                        }
                    }
                    SymbolKind::Sensor | SymbolKind::AddEdge | SymbolKind::Loop => {
                        assert!((-1.0..=1.0).contains(&s.params[0]));
                    }
                    _ => {}
                }
            }
        }
    }
}
