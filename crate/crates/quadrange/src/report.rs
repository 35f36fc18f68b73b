//! Serialization helpers: rationals are written as "p/q" strings.

use serde::ser::SerializeSeq;
use serde::Serializer;

use crate::core::PlanePoint;
use crate::scalar::{fmt_rat, Rat};

pub fn ser_rat<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rat(r))
}

pub fn ser_opt_rat<S: Serializer>(r: &Option<Rat>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&fmt_rat(r)),
        None => s.serialize_none(),
    }
}

pub fn ser_vec<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&fmt_rat(x))?;
    }
    seq.end()
}

pub fn ser_opt_vec<S: Serializer>(v: &Option<Vec<Rat>>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => ser_vec(v, s),
        None => s.serialize_none(),
    }
}

pub fn ser_pt<S: Serializer>(p: &PlanePoint, s: S) -> Result<S::Ok, S::Error> {
    ser_vec(p, s)
}

pub fn ser_opt_pt<S: Serializer>(p: &Option<PlanePoint>, s: S) -> Result<S::Ok, S::Error> {
    match p {
        Some(p) => ser_vec(p, s),
        None => s.serialize_none(),
    }
}

/// Extended reals: finite values as numbers, infinities as "inf"/"-inf".
pub fn ser_ext<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else if x.is_nan() {
        s.serialize_str("nan")
    } else if *x > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}
