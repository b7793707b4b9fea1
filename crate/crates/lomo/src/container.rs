//! Binary model container.
//!
//! All integers and floats are little-endian.
//!
//! ```text
//! "LOMO1"  u16 version  u8 kind  u64 seed  u8 task (0 binary, 1 multiclass)
//! u32 model count, then per model:
//!   i64 class label  u64 d  u64 M  f64 gamma_g  u8 pooling (0 mean, 1 max)
//!   u64 coverage  u8 has_global
//!   f64[M*d] templates  f64[M!] ordering costs  f64[d] global (if present)
//! ```

use std::path::Path;

use lomo_core::{factorial, Classifier, Model, ModelKind, ModelParts, MulticlassModel, Pooling, MAX_EVENTS};

use crate::error::{Error, Result};

pub const MAGIC: &[u8; 5] = b"LOMO1";
pub const VERSION: u16 = 1;

/// A trained classifier together with how it was produced.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelFile {
    pub kind: ModelKind,
    pub seed: u64,
    pub classifier: Classifier,
}

pub fn encode(file: &ModelFile) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.push(file.kind.code());
    out.extend_from_slice(&file.seed.to_le_bytes());
    let labels: Vec<i64> = match &file.classifier {
        Classifier::Binary(_) => {
            out.push(0);
            vec![1]
        }
        Classifier::Multiclass(mc) => {
            out.push(1);
            mc.class_labels.clone()
        }
    };
    let models = file.classifier.models();
    out.extend_from_slice(&(models.len() as u32).to_le_bytes());
    for (model, label) in models.iter().zip(labels) {
        out.extend_from_slice(&label.to_le_bytes());
        out.extend_from_slice(&(model.dim() as u64).to_le_bytes());
        out.extend_from_slice(&(model.events() as u64).to_le_bytes());
        out.extend_from_slice(&model.gamma_g().to_le_bytes());
        out.push(match model.pooling() {
            Pooling::Mean => 0,
            Pooling::Max => 1,
        });
        out.extend_from_slice(&(model.coverage() as u64).to_le_bytes());
        out.push(u8::from(model.global_template().is_some()));
        let values = model.templates().iter().chain(model.ordering_costs()).chain(model.global_template().into_iter().flatten());
        for v in values {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> std::result::Result<&'a [u8], String> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len()).ok_or("truncated model file")?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn array<const N: usize>(&mut self) -> std::result::Result<[u8; N], String> {
        Ok(self.take(N)?.try_into().expect("length checked"))
    }

    fn u8(&mut self) -> std::result::Result<u8, String> {
        Ok(self.array::<1>()?[0])
    }

    fn u64(&mut self) -> std::result::Result<u64, String> {
        self.array().map(u64::from_le_bytes)
    }

    fn usize(&mut self, what: &str, max: u64) -> std::result::Result<usize, String> {
        let v = self.u64()?;
        if v > max {
            return Err(format!("{what} {v} out of range"));
        }
        Ok(v as usize)
    }

    fn f64s(&mut self, n: usize) -> std::result::Result<Vec<f64>, String> {
        let bytes = self.take(n.checked_mul(8).ok_or("length overflow")?)?;
        Ok(bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect())
    }
}

pub fn decode(bytes: &[u8]) -> std::result::Result<ModelFile, String> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(MAGIC.len()).ok() != Some(&MAGIC[..]) {
        return Err("not a LOMO1 model file".into());
    }
    let version = u16::from_le_bytes(r.array()?);
    if version != VERSION {
        return Err(format!("unsupported container version {version}"));
    }
    let code = r.u8()?;
    let kind = ModelKind::from_code(code).ok_or_else(|| format!("unknown model kind code {code}"))?;
    let seed = r.u64()?;
    let task = r.u8()?;
    let count = u32::from_le_bytes(r.array()?) as usize;
    if count == 0 || (task == 0 && count != 1) {
        return Err(format!("bad model count {count}"));
    }

    let mut labels = Vec::with_capacity(count);
    let mut models = Vec::with_capacity(count);
    for _ in 0..count {
        labels.push(i64::from_le_bytes(r.array()?));
        let dim = r.usize("dimension", (bytes.len() / 8) as u64)?;
        let events = r.usize("event count", MAX_EVENTS as u64)?;
        let gamma_g = f64::from_le_bytes(r.array()?);
        let pooling = match r.u8()? {
            0 => Pooling::Mean,
            1 => Pooling::Max,
            p => return Err(format!("unknown pooling code {p}")),
        };
        let coverage = r.usize("coverage", u32::MAX as u64)?;
        let has_global = match r.u8()? {
            0 => false,
            1 => true,
            b => return Err(format!("bad global-template flag {b}")),
        };
        let templates = r.f64s(events * dim)?;
        let ordering_costs = r.f64s(factorial(events))?;
        let global_template = if has_global { Some(r.f64s(dim)?) } else { None };
        let parts = ModelParts { events, dim, templates, ordering_costs, global_template, gamma_g, pooling, coverage };
        models.push(Model::from_parts(parts).map_err(|e| e.to_string())?);
    }
    if r.pos != bytes.len() {
        return Err(format!("{} trailing bytes", bytes.len() - r.pos));
    }

    let classifier = match task {
        0 => {
            if labels[0] != 1 {
                return Err(format!("binary model stored with class label {}", labels[0]));
            }
            Classifier::Binary(models.pop().expect("count is 1"))
        }
        1 => {
            if labels.iter().enumerate().any(|(i, &l)| l != i as i64) {
                return Err("multiclass labels must be 0..K in order".into());
            }
            Classifier::Multiclass(MulticlassModel::new(labels, models).map_err(|e| e.to_string())?)
        }
        t => return Err(format!("unknown task code {t}")),
    };
    Ok(ModelFile { kind, seed, classifier })
}

pub fn write_model(path: impl AsRef<Path>, file: &ModelFile) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, encode(file)).map_err(|e| Error::io(path, e))
}

pub fn read_model(path: impl AsRef<Path>) -> Result<ModelFile> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes).map_err(|m| Error::format(path, m))
}
