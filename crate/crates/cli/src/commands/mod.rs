mod analysis;
mod averages;
mod counting;
mod equidist;
mod geometry;

use crate::args::Command;
use crate::ctx::{Ctx, Outcome};

pub fn dispatch(cmd: &Command, ctx: &mut Ctx) -> Outcome<String> {
    match cmd {
        Command::Count(a) => counting::count(a, ctx),
        Command::Asym(a) => counting::asym(a, ctx),
        Command::Jfun(a) => counting::jfun(a, ctx),
        Command::Expsum(a) => analysis::expsum(a, ctx),
        Command::Vdc(a) => analysis::vdc(a, ctx),
        Command::Surface(a) => geometry::surface(a, ctx),
        Command::Fourier(a) => geometry::fourier(a, ctx),
        Command::Cap(a) => geometry::cap(a, ctx),
        Command::Project(a) => equidist::project_cmd(a, ctx),
        Command::Weyl(a) => equidist::weyl(a, ctx),
        Command::Disc(a) => equidist::disc(a, ctx),
        Command::Kernels(a) => averages::kernels(a, ctx),
        Command::Average(a) => averages::average(a, ctx),
        Command::Ergodic(a) => averages::ergodic(a, ctx),
        Command::Variation(a) => averages::variation(a, ctx),
        Command::Minor(a) => averages::minor(a, ctx),
    }
}
