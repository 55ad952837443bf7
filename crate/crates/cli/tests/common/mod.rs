//! Runs the built binary inside a scratch directory.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use schrom::io::{write_graph, write_partition, GraphFormat};
use schrom::{Graph, VertexPartition};

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub struct Sandbox {
    pub dir: tempfile::TempDir,
}

impl Sandbox {
    pub fn new() -> Self {
        Self {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    pub fn run(&self, args: &[&str]) -> Outcome {
        self.run_env(args, &[])
    }

    pub fn run_env(&self, args: &[&str], env: &[(&str, &str)]) -> Outcome {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_schrom"));
        cmd.current_dir(self.dir.path()).args(args).env_remove("SCHROM_SEED");
        for (k, v) in env {
            cmd.env(k, v);
        }
        let out = cmd.output().unwrap();
        Outcome {
            code: out.status.code().unwrap_or(-1),
            stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
            stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
        }
    }

    pub fn write_graph(&self, name: &str, g: &Graph) -> PathBuf {
        let path = self.path(name);
        std::fs::write(&path, write_graph(g, GraphFormat::from_path(&path))).unwrap();
        path
    }

    pub fn write_partition(&self, name: &str, k: usize, parts: Vec<Vec<usize>>, n: usize) -> PathBuf {
        let path = self.path(name);
        std::fs::write(&path, write_partition(&VertexPartition::new(k, parts, n).unwrap())).unwrap();
        path
    }

    pub fn read(&self, name: &str) -> Vec<u8> {
        std::fs::read(self.path(name)).unwrap()
    }

    pub fn read_string(&self, name: &str) -> String {
        std::fs::read_to_string(self.path(name)).unwrap()
    }
}

/// Metadata with the wall-clock field removed.
pub fn stable_meta(path: &Path) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("wall_time_ms");
    v
}
