//! Versioned binary checkpoint container.
//!
//! Layout (little-endian):
//!
//! ```text
//! magic    8 bytes  "CSISGAN\0"
//! version  u32      1
//! kind     u16 length + UTF-8
//! seed     u64
//! count    u32      number of tensors
//! per tensor:
//!   name   u16 length + UTF-8
//!   ndim   u32
//!   dims   ndim x u64
//!   data   prod(dims) x f64
//! ```
//!
//! Values are stored as raw IEEE-754 bits, so a reload reproduces forward outputs bit for bit.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use super::arch::*;
use super::discriminator::DiscClassNet;
use super::generator::{Generator, GeneratorNet, SimplifiedGeneratorNet};
use crate::error::{Error, Result};
use crate::tensor::{ConvKernelBank, DenseParams};

const MAGIC: &[u8; 8] = b"CSISGAN\0";
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct NamedTensor {
    pub name: String,
    pub dims: Vec<usize>,
    pub data: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub kind: String,
    pub seed: u64,
    pub tensors: Vec<NamedTensor>,
}

pub const KIND_GENERATOR: &str = "generator";
pub const KIND_SIMPLIFIED_GENERATOR: &str = "simplified-generator";
pub const KIND_DISC_CLASS: &str = "disc-class";

impl Checkpoint {
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&CHECKPOINT_VERSION.to_le_bytes())?;
        write_str(&mut w, &self.kind)?;
        w.write_all(&self.seed.to_le_bytes())?;
        w.write_all(&(self.tensors.len() as u32).to_le_bytes())?;
        for t in &self.tensors {
            write_str(&mut w, &t.name)?;
            w.write_all(&(t.dims.len() as u32).to_le_bytes())?;
            for d in &t.dims {
                w.write_all(&(*d as u64).to_le_bytes())?;
            }
            for v in &t.data {
                w.write_all(&v.to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic).map_err(truncated)?;
        if &magic != MAGIC {
            return Err(Error::Checkpoint("bad magic; not a checkpoint file".into()));
        }
        let version = read_u32(&mut r)?;
        if version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint(format!("unsupported version {version}")));
        }
        let kind = read_str(&mut r)?;
        let seed = read_u64(&mut r)?;
        let count = read_u32(&mut r)? as usize;
        let mut tensors = Vec::with_capacity(count.min(64));
        for _ in 0..count {
            let name = read_str(&mut r)?;
            let ndim = read_u32(&mut r)? as usize;
            if ndim > 8 {
                return Err(Error::Checkpoint(format!("tensor {name}: implausible rank {ndim}")));
            }
            let dims = (0..ndim).map(|_| read_u64(&mut r).map(|d| d as usize)).collect::<Result<Vec<_>>>()?;
            let len: usize = dims.iter().product();
            if len > 1 << 28 {
                return Err(Error::Checkpoint(format!("tensor {name}: implausible size {len}")));
            }
            let mut data = Vec::with_capacity(len);
            let mut buf = [0u8; 8];
            for _ in 0..len {
                r.read_exact(&mut buf).map_err(truncated)?;
                data.push(f64::from_le_bytes(buf));
            }
            tensors.push(NamedTensor { name, dims, data });
        }
        Ok(Checkpoint { kind, seed, tensors })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::new();
        self.write_to(&mut buf)?;
        fs::write(path, buf)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let bytes = fs::read(path)?;
        Self::read_from(bytes.as_slice())
    }

    fn take(&mut self, name: &str, dims: &[usize]) -> Result<Vec<f64>> {
        let pos = self
            .tensors
            .iter()
            .position(|t| t.name == name)
            .ok_or_else(|| Error::Checkpoint(format!("missing tensor {name}")))?;
        let t = self.tensors.remove(pos);
        if t.dims != dims {
            return Err(Error::Checkpoint(format!("tensor {name}: shape {:?}, expected {dims:?}", t.dims)));
        }
        Ok(t.data)
    }

    fn expect_kind(&self, kind: &str) -> Result<()> {
        if self.kind != kind {
            return Err(Error::Checkpoint(format!("expected a {kind} checkpoint, found {}", self.kind)));
        }
        Ok(())
    }

    fn finish(&self) -> Result<()> {
        if let Some(t) = self.tensors.first() {
            return Err(Error::Checkpoint(format!("unexpected tensor {}", t.name)));
        }
        Ok(())
    }
}

fn truncated(e: std::io::Error) -> Error {
    if e.kind() == std::io::ErrorKind::UnexpectedEof {
        Error::Checkpoint("truncated file".into())
    } else {
        Error::Io(e)
    }
}

fn write_str<W: Write>(w: &mut W, s: &str) -> Result<()> {
    w.write_all(&(s.len() as u16).to_le_bytes())?;
    w.write_all(s.as_bytes())?;
    Ok(())
}

fn read_u16<R: Read>(r: &mut R) -> Result<u16> {
    let mut b = [0u8; 2];
    r.read_exact(&mut b).map_err(truncated)?;
    Ok(u16::from_le_bytes(b))
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b).map_err(truncated)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b).map_err(truncated)?;
    Ok(u64::from_le_bytes(b))
}

fn read_str<R: Read>(r: &mut R) -> Result<String> {
    let len = read_u16(r)? as usize;
    let mut b = vec![0u8; len];
    r.read_exact(&mut b).map_err(truncated)?;
    String::from_utf8(b).map_err(|_| Error::Checkpoint("invalid UTF-8 in name".into()))
}

fn dense_tensors(prefix: &str, p: &DenseParams, out: &mut Vec<NamedTensor>) {
    out.push(NamedTensor {
        name: format!("{prefix}.weight"),
        dims: vec![p.out_dim(), p.in_dim()],
        data: p.weights().to_vec(),
    });
    out.push(NamedTensor {
        name: format!("{prefix}.bias"),
        dims: vec![p.out_dim()],
        data: p.bias().to_vec(),
    });
}

fn bank_tensors(prefix: &str, b: &ConvKernelBank, out: &mut Vec<NamedTensor>) {
    out.push(NamedTensor {
        name: format!("{prefix}.weight"),
        dims: vec![b.kernels(), b.size(), b.depth()],
        data: b.weights().to_vec(),
    });
    out.push(NamedTensor {
        name: format!("{prefix}.bias"),
        dims: vec![b.kernels()],
        data: b.biases().to_vec(),
    });
}

fn take_dense(ck: &mut Checkpoint, prefix: &str, out_dim: usize, in_dim: usize) -> Result<DenseParams> {
    let w = ck.take(&format!("{prefix}.weight"), &[out_dim, in_dim])?;
    let b = ck.take(&format!("{prefix}.bias"), &[out_dim])?;
    DenseParams::new(out_dim, in_dim, w, b)
}

fn take_bank(ck: &mut Checkpoint, prefix: &str, k: usize, f: usize, d: usize) -> Result<ConvKernelBank> {
    let w = ck.take(&format!("{prefix}.weight"), &[k, f, d])?;
    let b = ck.take(&format!("{prefix}.bias"), &[k])?;
    ConvKernelBank::new(k, f, d, w, b)
}

impl From<&GeneratorNet> for Checkpoint {
    fn from(g: &GeneratorNet) -> Self {
        let mut tensors = Vec::new();
        dense_tensors("fc", g.fc(), &mut tensors);
        for (l, b) in g.deconv_layers().iter().enumerate() {
            bank_tensors(&format!("deconv{}", l + 1), b, &mut tensors);
        }
        bank_tensors("out", g.output_layer(), &mut tensors);
        Checkpoint {
            kind: KIND_GENERATOR.into(),
            seed: g.seed(),
            tensors,
        }
    }
}

impl From<&SimplifiedGeneratorNet> for Checkpoint {
    fn from(g: &SimplifiedGeneratorNet) -> Self {
        let mut tensors = Vec::new();
        dense_tensors("fc", g.fc(), &mut tensors);
        Checkpoint {
            kind: KIND_SIMPLIFIED_GENERATOR.into(),
            seed: g.seed(),
            tensors,
        }
    }
}

impl From<&Generator> for Checkpoint {
    fn from(g: &Generator) -> Self {
        match g {
            Generator::Full(n) => n.into(),
            Generator::Simplified(n) => n.into(),
        }
    }
}

impl From<&DiscClassNet> for Checkpoint {
    fn from(d: &DiscClassNet) -> Self {
        let mut tensors = Vec::new();
        for (l, b) in d.conv_layers().iter().enumerate() {
            bank_tensors(&format!("conv{}", l + 1), b, &mut tensors);
        }
        dense_tensors("fc", d.output_layer(), &mut tensors);
        tensors.push(NamedTensor {
            name: "leaky_slope".into(),
            dims: vec![],
            data: vec![d.leaky_slope()],
        });
        Checkpoint {
            kind: KIND_DISC_CLASS.into(),
            seed: d.seed(),
            tensors,
        }
    }
}

impl TryFrom<Checkpoint> for GeneratorNet {
    type Error = Error;

    fn try_from(mut ck: Checkpoint) -> Result<Self> {
        ck.expect_kind(KIND_GENERATOR)?;
        let fc = take_dense(&mut ck, "fc", FC_UNITS, LATENT_DIM)?;
        let mut deconv = Vec::with_capacity(HIDDEN_LAYERS);
        for l in 0..HIDDEN_LAYERS {
            deconv.push(take_bank(&mut ck, &format!("deconv{}", l + 1), FILTERS, KERNEL_SIZE, FILTERS)?);
        }
        let out = take_bank(&mut ck, "out", 1, KERNEL_SIZE, FILTERS)?;
        ck.finish()?;
        let deconv: [ConvKernelBank; HIDDEN_LAYERS] = deconv.try_into().expect("three layers");
        Ok(GeneratorNet::from_parts(fc, deconv, out, ck.seed))
    }
}

impl TryFrom<Checkpoint> for SimplifiedGeneratorNet {
    type Error = Error;

    fn try_from(mut ck: Checkpoint) -> Result<Self> {
        ck.expect_kind(KIND_SIMPLIFIED_GENERATOR)?;
        let fc = take_dense(&mut ck, "fc", CSI_WIDTH, LATENT_DIM)?;
        ck.finish()?;
        Ok(SimplifiedGeneratorNet::from_parts(fc, ck.seed))
    }
}

impl TryFrom<Checkpoint> for Generator {
    type Error = Error;

    fn try_from(ck: Checkpoint) -> Result<Self> {
        match ck.kind.as_str() {
            KIND_GENERATOR => Ok(Generator::Full(ck.try_into()?)),
            KIND_SIMPLIFIED_GENERATOR => Ok(Generator::Simplified(ck.try_into()?)),
            other => Err(Error::Checkpoint(format!("not a generator checkpoint: {other}"))),
        }
    }
}

impl TryFrom<Checkpoint> for DiscClassNet {
    type Error = Error;

    fn try_from(mut ck: Checkpoint) -> Result<Self> {
        ck.expect_kind(KIND_DISC_CLASS)?;
        let depths = [1, FILTERS, FILTERS];
        let mut conv = Vec::with_capacity(HIDDEN_LAYERS);
        for (l, depth) in depths.iter().enumerate() {
            conv.push(take_bank(&mut ck, &format!("conv{}", l + 1), FILTERS, KERNEL_SIZE, *depth)?);
        }
        let flat = discriminator_flat_len().expect("architecture constants");
        let fc = take_dense(&mut ck, "fc", NUM_CLASSES, flat)?;
        let slope = ck.take("leaky_slope", &[])?[0];
        ck.finish()?;
        let conv: [ConvKernelBank; HIDDEN_LAYERS] = conv.try_into().expect("three layers");
        Ok(DiscClassNet::from_parts(conv, fc, slope, ck.seed))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_discriminator, build_generator, build_simplified_generator};

    #[test]
    fn generator_round_trip_is_bit_identical() {
        let g = build_generator(11);
        let mut buf = Vec::new();
        Checkpoint::from(&g).write_to(&mut buf).unwrap();
        let back: GeneratorNet = Checkpoint::read_from(buf.as_slice()).unwrap().try_into().unwrap();
        assert_eq!(back, g);
        let z = vec![0.3; LATENT_DIM];
        assert_eq!(back.generate(&z).unwrap(), g.generate(&z).unwrap());
    }

    #[test]
    fn disc_round_trip_is_bit_identical() {
        let d = build_discriminator(5);
        let mut buf = Vec::new();
        Checkpoint::from(&d).write_to(&mut buf).unwrap();
        let back: DiscClassNet = Checkpoint::read_from(buf.as_slice()).unwrap().try_into().unwrap();
        assert_eq!(back, d);
        assert_eq!(back.seed(), 5);
    }

    #[test]
    fn simplified_round_trip() {
        let g = Generator::Simplified(build_simplified_generator(2));
        let mut buf = Vec::new();
        Checkpoint::from(&g).write_to(&mut buf).unwrap();
        let back: Generator = Checkpoint::read_from(buf.as_slice()).unwrap().try_into().unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn rejects_wrong_kind_and_garbage() {
        let d = build_discriminator(5);
        let mut buf = Vec::new();
        Checkpoint::from(&d).write_to(&mut buf).unwrap();
        let ck = Checkpoint::read_from(buf.as_slice()).unwrap();
        assert!(GeneratorNet::try_from(ck).is_err());
        assert!(Checkpoint::read_from(&b"not a checkpoint"[..]).is_err());
        assert!(Checkpoint::read_from(&buf[..buf.len() - 3]).is_err());
    }
}
