//! Resolved command-line options shared by every subcommand.

use std::fs;
use std::path::PathBuf;

use tsys::oracle::Instance;
use tsys::surface::{Point3, SteppedSurface};

use crate::error::CliError;
use crate::{Format, InstanceArgs};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurfaceSource {
    Fund,
    File(PathBuf),
}

pub struct RunConfig {
    pub point: Point3,
    pub surface: SurfaceSource,
    pub format: Format,
    loaded: SteppedSurface,
}

impl RunConfig {
    pub fn from_args(args: &InstanceArgs) -> Result<Self, CliError> {
        let &[i, j, k] = args.point.as_slice() else {
            return Err(CliError::Usage("--point takes exactly three integers".into()));
        };
        let point = Point3::new(i, j, k)?;
        let (surface, loaded) = if args.surface == "fund" {
            (SurfaceSource::Fund, SteppedSurface::fund())
        } else {
            let path = PathBuf::from(&args.surface);
            let text = fs::read_to_string(&path).map_err(|source| CliError::Io { path: args.surface.clone(), source })?;
            (SurfaceSource::File(path), SteppedSurface::from_json(&text)?)
        };
        Ok(RunConfig { point, surface, format: args.format, loaded })
    }

    /// The instance, after the scope check.
    pub fn instance(&self) -> Result<Instance, CliError> {
        Ok(Instance::new(self.loaded.clone(), self.point)?)
    }

    pub fn surface_name(&self) -> String {
        match &self.surface {
            SurfaceSource::Fund => "fund".into(),
            SurfaceSource::File(p) => p.display().to_string(),
        }
    }
}
