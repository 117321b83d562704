//! Circuit intermediate representation, an evaluator replaying a circuit into
//! its unitary, component counting, and JSON serialization.

use crate::matrix::{embed_block, ComplexMatrix, MatrixDoc, UnitaryMatrix};
use crate::primitives::{bs_matrix, BsRatio};
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// One optical element; modes are 1-based.
#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    /// Single-mode phase shifter multiplying the amplitude by e^{i phase}.
    PhaseShifter {
        /// Mode the shifter sits on.
        mode: usize,
        /// Applied phase in radians.
        phase: f64,
    },
    /// Beamsplitter coupling adjacent modes (mode, mode+1).
    Beamsplitter {
        /// Upper mode of the coupled pair.
        mode: usize,
        /// Transmittance.
        eta: BsRatio,
    },
    /// One column of phase shifters covering every mode.
    PhaseMask {
        /// Applied phase per mode; length equals the circuit width.
        phases: Vec<f64>,
    },
    /// An opaque fixed block spanning contiguous modes.
    FixedBlock {
        /// First mode the block covers.
        first_mode: usize,
        /// Hardware label, e.g. "tritter" or "mbs".
        tag: String,
        /// The block's matrix.
        matrix: UnitaryMatrix,
        /// True when the block is traversed backwards, applying the transpose
        /// of its matrix (the same physical device, flipped).
        reversed: bool,
    },
}

/// Ordered list of elements on a fixed number of modes; index 0 acts first.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    width: usize,
    elements: Vec<Element>,
}

/// Component totals for one circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentReport {
    /// Beamsplitter count.
    pub n_bs: usize,
    /// Phase-shifter count: standalone shifters plus nonzero mask entries.
    pub n_ps: usize,
    /// Phase-mask count.
    pub n_phase_masks: usize,
    /// Fixed multiport blocks (tags "tritter" and "mbs").
    pub n_fixed_mbs: usize,
    /// Scheme label the circuit came from.
    pub scheme: String,
}

impl Circuit {
    /// Validates element indices against the width and builds the circuit.
    pub fn new(width: usize, elements: Vec<Element>) -> Result<Self> {
        if width == 0 {
            return Err(Error::Dimension("circuit width must be at least 1".into()));
        }
        for (idx, el) in elements.iter().enumerate() {
            validate_element(el, width)
                .map_err(|e| Error::Structure(format!("element {idx}: {e}")))?;
        }
        Ok(Self { width, elements })
    }

    /// Number of modes.
    pub fn width(&self) -> usize {
        self.width
    }

    /// The elements in application order.
    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    /// Replays the circuit into its unitary; later elements multiply on the
    /// left.
    pub fn evaluate(&self) -> UnitaryMatrix {
        let n = self.width;
        let mut acc = ComplexMatrix::identity(n);
        for el in &self.elements {
            let m = element_matrix(el, n);
            acc = m.mul(&acc).expect("validated dimensions");
        }
        UnitaryMatrix::new_unchecked(acc)
    }

    /// Tallies components by variant under the given scheme label.
    pub fn count_components(&self, scheme: &str) -> ComponentReport {
        let mut report = ComponentReport {
            n_bs: 0,
            n_ps: 0,
            n_phase_masks: 0,
            n_fixed_mbs: 0,
            scheme: scheme.to_string(),
        };
        for el in &self.elements {
            match el {
                Element::PhaseShifter { .. } => report.n_ps += 1,
                Element::Beamsplitter { .. } => report.n_bs += 1,
                Element::PhaseMask { phases } => {
                    report.n_phase_masks += 1;
                    report.n_ps += phases.iter().filter(|p| **p != 0.0).count();
                }
                Element::FixedBlock { tag, .. } => {
                    if tag == "tritter" || tag == "mbs" {
                        report.n_fixed_mbs += 1;
                    }
                }
            }
        }
        report
    }

    /// Serializes to the circuit JSON document.
    pub fn to_json(&self) -> Result<String> {
        let doc = CircuitDoc::from_circuit(self)?;
        serde_json::to_string_pretty(&doc).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Parses and validates a circuit JSON document.
    pub fn from_json(text: &str) -> Result<Circuit> {
        let doc: CircuitDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        doc.into_circuit()
    }
}

fn validate_element(el: &Element, width: usize) -> std::result::Result<(), String> {
    match el {
        Element::PhaseShifter { mode, phase } => {
            if *mode < 1 || *mode > width {
                return Err(format!("mode {mode} outside 1..={width} (modes are 1-based)"));
            }
            if !phase.is_finite() {
                return Err("phase must be finite".into());
            }
        }
        Element::Beamsplitter { mode, .. } => {
            if *mode < 1 || *mode + 1 > width {
                return Err(format!(
                    "beamsplitter couples modes ({mode}, {}), outside width {width}",
                    mode + 1
                ));
            }
        }
        Element::PhaseMask { phases } => {
            if phases.len() != width {
                return Err(format!(
                    "mask has {} phases but the circuit has {width} modes",
                    phases.len()
                ));
            }
            if phases.iter().any(|p| !p.is_finite()) {
                return Err("mask phases must be finite".into());
            }
        }
        Element::FixedBlock {
            first_mode, matrix, ..
        } => {
            let d = matrix.dim();
            if *first_mode < 1 || first_mode + d - 1 > width {
                return Err(format!(
                    "block of dimension {d} at mode {first_mode} exceeds width {width}"
                ));
            }
        }
    }
    Ok(())
}

fn element_matrix(el: &Element, n: usize) -> ComplexMatrix {
    match el {
        Element::PhaseShifter { mode, phase } => {
            let mut m = ComplexMatrix::identity(n);
            m.set(mode - 1, mode - 1, Complex64::cis(*phase));
            m
        }
        Element::Beamsplitter { mode, eta } => {
            embed_block(n, bs_matrix(*eta).inner(), *mode, mode + 1).expect("validated modes")
        }
        Element::PhaseMask { phases } => {
            let mut m = ComplexMatrix::identity(n);
            for (k, p) in phases.iter().enumerate() {
                m.set(k, k, Complex64::cis(*p));
            }
            m
        }
        Element::FixedBlock {
            first_mode,
            matrix,
            reversed,
            ..
        } => {
            let block = if *reversed {
                matrix.transpose()
            } else {
                matrix.inner().clone()
            };
            let d = block.rows();
            let mut m = ComplexMatrix::identity(n);
            for i in 0..d {
                for j in 0..d {
                    m.set(first_mode - 1 + i, first_mode - 1 + j, block.get(i, j));
                }
            }
            m
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CircuitDoc {
    width: usize,
    elements: Vec<ElementDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum ElementDoc {
    Ps {
        mode: usize,
        phase: f64,
    },
    Bs {
        mode: usize,
        eta: f64,
    },
    Mask {
        phases: Vec<f64>,
    },
    Block {
        first_mode: usize,
        tag: String,
        reversed: bool,
        matrix: MatrixDoc,
    },
}

impl CircuitDoc {
    fn from_circuit(c: &Circuit) -> Result<Self> {
        let elements = c
            .elements
            .iter()
            .map(|el| match el {
                Element::PhaseShifter { mode, phase } => Ok(ElementDoc::Ps {
                    mode: *mode,
                    phase: *phase,
                }),
                Element::Beamsplitter { mode, eta } => Ok(ElementDoc::Bs {
                    mode: *mode,
                    eta: eta.eta(),
                }),
                Element::PhaseMask { phases } => Ok(ElementDoc::Mask {
                    phases: phases.clone(),
                }),
                Element::FixedBlock {
                    first_mode,
                    tag,
                    matrix,
                    reversed,
                } => Ok(ElementDoc::Block {
                    first_mode: *first_mode,
                    tag: tag.clone(),
                    reversed: *reversed,
                    matrix: MatrixDoc::from_matrix(matrix.inner())?,
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            width: c.width,
            elements,
        })
    }

    fn into_circuit(self) -> Result<Circuit> {
        let width = self.width;
        let mut elements = Vec::with_capacity(self.elements.len());
        for (idx, doc) in self.elements.into_iter().enumerate() {
            let el = match doc {
                ElementDoc::Ps { mode, phase } => Element::PhaseShifter { mode, phase },
                ElementDoc::Bs { mode, eta } => Element::Beamsplitter {
                    mode,
                    eta: BsRatio::new(eta)
                        .map_err(|e| Error::Parse(format!("element {idx}: {e}")))?,
                },
                ElementDoc::Mask { phases } => Element::PhaseMask { phases },
                ElementDoc::Block {
                    first_mode,
                    tag,
                    reversed,
                    matrix,
                } => Element::FixedBlock {
                    first_mode,
                    tag,
                    reversed,
                    matrix: UnitaryMatrix::new(matrix.into_matrix()?)
                        .map_err(|e| Error::Parse(format!("element {idx}: {e}")))?,
                },
            };
            validate_element(&el, width)
                .map_err(|e| Error::Parse(format!("element {idx}: {e}")))?;
            elements.push(el);
        }
        Circuit::new(width, elements)
    }
}
