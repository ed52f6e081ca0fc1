//! Data parameters carried by actions and recursion variables.

use std::fmt;

use serde::Serialize;

/// Value of the alternating qubit, `|0>` or `|1>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Bit {
    Zero,
    One,
}

impl Bit {
    pub fn flip(self) -> Bit {
        match self {
            Bit::Zero => Bit::One,
            Bit::One => Bit::Zero,
        }
    }

    pub fn from_index(i: usize) -> Bit {
        if i.is_multiple_of(2) {
            Bit::Zero
        } else {
            Bit::One
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Bit::Zero => 0,
            Bit::One => 1,
        }
    }
}

impl fmt::Display for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

/// A ground data argument.
///
/// Surface syntax: `0`/`1` for bits, `err` for the error message, `d<i>` for
/// the i-th datum of the finite domain (1-based), `kl` for the symbolic
/// measurement outcome, any capitalised identifier for a qubit name, and
/// `(x, y)` for pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum DataValue {
    Bit(Bit),
    Err,
    Qubit(String),
    Datum(u32),
    Kl,
    Pair(Box<DataValue>, Box<DataValue>),
}

impl DataValue {
    pub fn qubit(name: &str) -> DataValue {
        DataValue::Qubit(name.to_string())
    }

    /// Largest datum index mentioned anywhere in this value.
    pub fn max_datum(&self) -> u32 {
        match self {
            DataValue::Datum(i) => *i,
            DataValue::Pair(a, b) => a.max_datum().max(b.max_datum()),
            _ => 0,
        }
    }
}

impl From<Bit> for DataValue {
    fn from(b: Bit) -> Self {
        DataValue::Bit(b)
    }
}

impl fmt::Display for DataValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataValue::Bit(b) => write!(f, "{b}"),
            DataValue::Err => f.write_str("err"),
            DataValue::Qubit(q) => f.write_str(q),
            DataValue::Datum(i) => write!(f, "d{i}"),
            DataValue::Kl => f.write_str("kl"),
            DataValue::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

pub(crate) fn write_args<T: fmt::Display>(f: &mut fmt::Formatter<'_>, args: &[T]) -> fmt::Result {
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{a}")?;
    }
    Ok(())
}
