//! Operator words such as `(1 ⊗ m̄)σ12(1 ⊗ m̄)` evaluated to a single map tensor.
//!
//! A map `A^{⊗a} -> A^{⊗b}` is stored as a tensor with `a` lower legs (inputs)
//! followed by `b` upper legs (outputs). Words are written left to right exactly
//! as printed and composed right to left: evaluation starts from the identity on
//! the codomain and precomposes each factor in turn, so intermediate tensors
//! never exceed the rank of the final map plus the factor being absorbed.

use crate::error::{Error, Result};
use crate::tensor::{apply_basis_perm, contract, permute_legs, BasisPermutation, DenseTensor};

/// One tensor factor of a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    /// `1`
    Id,
    /// `P^k`
    P(i32),
    /// `m : A⊗A⊗A -> A`
    M,
    /// `m̄ : A⊗A -> A⊗A`
    Mbar,
}

impl Op {
    fn arity(self) -> (usize, usize) {
        match self {
            Op::Id | Op::P(_) => (1, 1),
            Op::M => (3, 1),
            Op::Mbar => (2, 2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factor {
    /// `op_1 ⊗ op_2 ⊗ ...`
    Tensor(Vec<Op>),
    /// `σ_{ij}` with 1-based slots.
    Swap(usize, usize),
}

/// The operations a word may refer to.
#[derive(Debug, Clone, Copy)]
pub struct Operators<'a> {
    pub p: &'a BasisPermutation,
    pub m: Option<&'a DenseTensor>,
    pub mbar: &'a DenseTensor,
}

/// Shorthand for a tensor factor.
pub fn t(ops: &[Op]) -> Factor {
    Factor::Tensor(ops.to_vec())
}

/// Evaluates a word whose leftmost factor has `codomain` output slots.
pub fn evaluate(ops: &Operators<'_>, codomain: usize, word: &[Factor]) -> Result<DenseTensor> {
    let n = ops.mbar.n();
    let mut map = DenseTensor::identity_map(n, codomain)?;
    let mut inputs = codomain;
    for factor in word {
        match factor {
            Factor::Swap(i, j) => {
                if *i == 0 || *j == 0 || *i > inputs || *j > inputs {
                    return Err(Error::Unsupported(format!(
                        "σ{i}{j} on {inputs} slots"
                    )));
                }
                let mut perm: Vec<usize> = (0..map.rank()).collect();
                perm.swap(i - 1, j - 1);
                map = permute_legs(&map, &perm)?;
            }
            Factor::Tensor(list) => {
                let out_arity: usize = list.iter().map(|op| op.arity().1).sum();
                if out_arity != inputs {
                    return Err(Error::Unsupported(format!(
                        "factor {list:?} produces {out_arity} slots, expected {inputs}"
                    )));
                }
                let mut pos = 0;
                for &op in list {
                    let (a_in, a_out) = op.arity();
                    match op {
                        Op::Id => {}
                        Op::P(k) => map = apply_basis_perm(&map, ops.p, pos, k)?,
                        Op::M | Op::Mbar => {
                            let g = match op {
                                Op::M => ops.m.ok_or_else(|| {
                                    Error::Unsupported("word uses m but none was supplied".into())
                                })?,
                                _ => ops.mbar,
                            };
                            map = absorb(&map, inputs, pos, g, a_in, a_out)?;
                            inputs = inputs - a_out + a_in;
                        }
                    }
                    pos += a_in;
                }
            }
        }
    }
    Ok(map)
}

/// Precomposes `g` into input slots `pos..pos + a_out` of `map`, putting the
/// inputs of `g` in their place.
fn absorb(
    map: &DenseTensor,
    inputs: usize,
    pos: usize,
    g: &DenseTensor,
    a_in: usize,
    a_out: usize,
) -> Result<DenseTensor> {
    let outputs = map.rank() - inputs;
    let pairs: Vec<(usize, usize)> = (0..a_out).map(|r| (pos + r, a_in + r)).collect();
    let joined = contract(map, g, &pairs)?;
    // joined: [in 0..pos, in pos+a_out.., outputs, g inputs]
    let kept_inputs = inputs - a_out;
    let mut perm = Vec::with_capacity(joined.rank());
    perm.extend(0..pos);
    perm.extend((0..a_in).map(|r| kept_inputs + outputs + r));
    perm.extend(pos..kept_inputs);
    perm.extend((0..outputs).map(|r| kept_inputs + r));
    permute_legs(&joined, &perm)
}
