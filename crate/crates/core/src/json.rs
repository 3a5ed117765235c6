//! Serde helpers: complex numbers travel as `[re, im]` pairs.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub(crate) mod complex {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

pub(crate) mod complex_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

pub(crate) mod opt_complex_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Vec<Complex64>>, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Option<Vec<[f64; 2]>> = v.as_ref().map(|v| v.iter().map(|z| [z.re, z.im]).collect());
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Complex64>>, D::Error> {
        let pairs = Option::<Vec<[f64; 2]>>::deserialize(d)?;
        Ok(pairs.map(|p| p.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()))
    }
}
