//! Binary model files.
//!
//! Layout: `MAGIC`, `u32` format version, then tagged sections
//! (`[u8; 4]` tag, `u64` length, payload) and a trailing SHA-256 of
//! everything before it. Integers are little-endian.
//!
//! Sections: `CONF` (JSON config), `FEAT` and `MODL` (bincode).

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::pipeline::{PipelineConfig, TrainedPipeline};
use crate::features::FeatureUnion;
use crate::models::Model;

pub const MAGIC: [u8; 8] = *b"FNMODEL\0";
pub const FORMAT_VERSION: u32 = 1;

const TAG_CONF: [u8; 4] = *b"CONF";
const TAG_FEAT: [u8; 4] = *b"FEAT";
const TAG_MODL: [u8; 4] = *b"MODL";
const DIGEST_LEN: usize = 32;

#[derive(Debug, thiserror::Error)]
pub enum PersistError {
    #[error("unsupported model format version {found} (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("corrupt model file: {0}")]
    CorruptFile(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Stream(#[from] std::io::Error),
}

fn corrupt(msg: impl Into<String>) -> PersistError {
    PersistError::CorruptFile(msg.into())
}

fn section(buf: &mut Vec<u8>, tag: [u8; 4], payload: &[u8]) {
    buf.extend_from_slice(&tag);
    buf.extend_from_slice(&(payload.len() as u64).to_le_bytes());
    buf.extend_from_slice(payload);
}

pub fn to_bytes(model: &TrainedPipeline) -> Vec<u8> {
    let conf = serde_json::to_vec(&model.config).expect("config serialises");
    let feat = bincode::serialize(&model.features).expect("features serialise");
    let modl = bincode::serialize(&model.model).expect("model serialises");
    let mut buf = Vec::with_capacity(conf.len() + feat.len() + modl.len() + 80);
    buf.extend_from_slice(&MAGIC);
    buf.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    section(&mut buf, TAG_CONF, &conf);
    section(&mut buf, TAG_FEAT, &feat);
    section(&mut buf, TAG_MODL, &modl);
    let digest = Sha256::digest(&buf);
    buf.extend_from_slice(&digest);
    buf
}

pub fn from_bytes(bytes: &[u8]) -> Result<TrainedPipeline, PersistError> {
    let header = MAGIC.len() + 4;
    if bytes.len() < header || bytes[..MAGIC.len()] != MAGIC {
        return Err(corrupt("bad magic"));
    }
    let found = u32::from_le_bytes(bytes[MAGIC.len()..header].try_into().unwrap());
    if found != FORMAT_VERSION {
        return Err(PersistError::VersionMismatch { found, expected: FORMAT_VERSION });
    }
    if bytes.len() < header + DIGEST_LEN {
        return Err(corrupt("truncated"));
    }
    let (body, digest) = bytes.split_at(bytes.len() - DIGEST_LEN);
    if Sha256::digest(body).as_slice() != digest {
        return Err(corrupt("checksum mismatch"));
    }

    let mut conf = None;
    let mut feat = None;
    let mut modl = None;
    let mut rest = &body[header..];
    while !rest.is_empty() {
        if rest.len() < 12 {
            return Err(corrupt("truncated section header"));
        }
        let tag: [u8; 4] = rest[..4].try_into().unwrap();
        let len = u64::from_le_bytes(rest[4..12].try_into().unwrap());
        let len = usize::try_from(len).ok().filter(|&l| l <= rest.len() - 12).ok_or_else(|| corrupt("section overruns file"))?;
        let payload = &rest[12..12 + len];
        rest = &rest[12 + len..];
        let slot = match tag {
            TAG_CONF => &mut conf,
            TAG_FEAT => &mut feat,
            TAG_MODL => &mut modl,
            // unknown sections are skipped
            _ => continue,
        };
        if slot.replace(payload).is_some() {
            return Err(corrupt(format!("duplicate section {}", String::from_utf8_lossy(&tag))));
        }
    }
    let conf = conf.ok_or_else(|| corrupt("missing CONF section"))?;
    let feat = feat.ok_or_else(|| corrupt("missing FEAT section"))?;
    let modl = modl.ok_or_else(|| corrupt("missing MODL section"))?;

    let config: PipelineConfig = serde_json::from_slice(conf).map_err(|e| corrupt(format!("CONF: {e}")))?;
    let features: FeatureUnion = bincode::deserialize(feat).map_err(|e| corrupt(format!("FEAT: {e}")))?;
    let model: Model = bincode::deserialize(modl).map_err(|e| corrupt(format!("MODL: {e}")))?;
    if features.config() != &config.features {
        return Err(corrupt("feature config does not match CONF"));
    }
    Ok(TrainedPipeline { config, features, model })
}

pub fn write_model<W: Write>(model: &TrainedPipeline, mut writer: W) -> Result<(), PersistError> {
    writer.write_all(&to_bytes(model))?;
    writer.flush()?;
    Ok(())
}

pub fn read_model<R: Read>(mut reader: R) -> Result<TrainedPipeline, PersistError> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    from_bytes(&bytes)
}

pub fn save_model(model: &TrainedPipeline, path: impl AsRef<Path>) -> Result<(), PersistError> {
    let path = path.as_ref();
    fs::write(path, to_bytes(model)).map_err(|source| PersistError::Io { path: path.to_path_buf(), source })
}

pub fn load_model(path: impl AsRef<Path>) -> Result<TrainedPipeline, PersistError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| PersistError::Io { path: path.to_path_buf(), source })?;
    from_bytes(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Classifier;
    use crate::resources::Resources;
    use crate::search::pipeline::{ModelKind, ModelSpec};
    use crate::search::pipeline::tests::toy_split;

    fn trained(kind: ModelKind) -> TrainedPipeline {
        let mut model = ModelSpec::default_for(kind);
        if let ModelSpec::Rf { n_trees, .. } = &mut model {
            *n_trees = 3;
        }
        let c = PipelineConfig { model, ..Default::default() };
        TrainedPipeline::train(&c, &Resources::default(), &toy_split()).unwrap()
    }

    #[test]
    fn round_trip_every_kind() {
        let texts = ["garlic cures covid!!!", "cases fell today, says ministry", ""];
        for kind in ModelKind::ALL {
            let p = trained(kind);
            let q = from_bytes(&to_bytes(&p)).unwrap();
            assert_eq!(q.config, p.config);
            assert_eq!(q.model, p.model);
            let a = p.decision_values(&texts).unwrap();
            let b = q.decision_values(&texts).unwrap();
            assert_eq!(a.iter().map(|v| v.to_bits()).collect::<Vec<_>>(), b.iter().map(|v| v.to_bits()).collect::<Vec<_>>());
            assert_eq!(q.model.dim(), p.model.dim());
        }
    }

    #[test]
    fn version_checked_before_checksum() {
        let mut bytes = to_bytes(&trained(ModelKind::Nb));
        bytes[MAGIC.len()..MAGIC.len() + 4].copy_from_slice(&2u32.to_le_bytes());
        assert!(matches!(from_bytes(&bytes), Err(PersistError::VersionMismatch { found: 2, expected: 1 })));
    }

    #[test]
    fn flipped_byte_is_corrupt() {
        let bytes = to_bytes(&trained(ModelKind::Nb));
        for pos in [20, bytes.len() / 2, bytes.len() - 1] {
            let mut b = bytes.clone();
            b[pos] ^= 0x40;
            assert!(matches!(from_bytes(&b), Err(PersistError::CorruptFile(_))), "byte {pos}");
        }
        assert!(matches!(from_bytes(&bytes[..bytes.len() - 5]), Err(PersistError::CorruptFile(_))));
        assert!(matches!(from_bytes(b"nope"), Err(PersistError::CorruptFile(_))));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.bin");
        let p = trained(ModelKind::Svm);
        save_model(&p, &path).unwrap();
        assert_eq!(load_model(&path).unwrap().model, p.model);
        assert!(matches!(load_model(dir.path().join("missing")), Err(PersistError::Io { .. })));
    }
}
