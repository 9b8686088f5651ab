//! Synthetic clumps of overlapping ellipses with ground truth.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::imaging::{gaussian_blur, FieldKind, ScalarField};
use crate::raster::{connected_components, LabelImage};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipse {
    pub center: Point,
    pub a: f64,
    pub b: f64,
    /// Rotation of the `a` axis, radians.
    pub angle: f64,
}

impl Ellipse {
    pub fn disk(center: Point, r: f64) -> Self {
        Self {
            center,
            a: r,
            b: r,
            angle: 0.0,
        }
    }

    fn axes(&self) -> (Point, Point) {
        let (s, c) = self.angle.sin_cos();
        (Point::new(c, s), Point::new(-s, c))
    }

    /// `1` on the outline, below 1 inside.
    pub fn level(&self, p: Point) -> f64 {
        let (e1, e2) = self.axes();
        let d = p - self.center;
        (d.dot(e1) / self.a).powi(2) + (d.dot(e2) / self.b).powi(2)
    }

    pub fn contains(&self, p: Point) -> bool {
        self.level(p) <= 1.0
    }

    /// Distance from the centre to the outline along unit direction `u`.
    pub fn reach(&self, u: Point) -> f64 {
        let (e1, e2) = self.axes();
        1.0 / ((u.dot(e1) / self.a).powi(2) + (u.dot(e2) / self.b).powi(2)).sqrt()
    }

    fn shifted(&self, by: Point) -> Self {
        Self {
            center: self.center + by,
            ..*self
        }
    }
}

/// Fraction by which the centre distance of `e` and `f` falls short of the
/// sum of their reaches towards each other.
pub fn overlap(e: &Ellipse, f: &Ellipse) -> f64 {
    let d = f.center - e.center;
    let dist = d.norm();
    let Some(u) = d.normalized() else { return 1.0 };
    1.0 - dist / (e.reach(u) + f.reach(-u))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthParams {
    pub min_objects: usize,
    pub max_objects: usize,
    /// Semi-axis range, px.
    pub radius: (f64, f64),
    /// Largest ratio between semi-axes.
    pub max_aspect: f64,
    /// Overlap range between an object and the one it attaches to.
    pub overlap: (f64, f64),
    /// Object brightness range.
    pub brightness: (f64, f64),
    pub background: f64,
    /// Relative darkening at the seams between objects.
    pub seam_depth: f64,
    /// Width (sigma, px) of the seam darkening.
    pub seam_width: f64,
    pub blur_sigma: f64,
    pub noise_sigma: f64,
    /// Empty border around the clump, px.
    pub margin: usize,
    pub max_attempts: usize,
}

impl Default for SynthParams {
    fn default() -> Self {
        Self {
            min_objects: 2,
            max_objects: 5,
            radius: (12.0, 20.0),
            max_aspect: 1.5,
            overlap: (0.1, 0.3),
            brightness: (0.6, 0.9),
            background: 0.05,
            seam_depth: 0.35,
            seam_width: 1.5,
            blur_sigma: 1.0,
            noise_sigma: 0.02,
            margin: 6,
            max_attempts: 100,
        }
    }
}

/// A dark spot painted on top of a rendered clump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DarkSpot {
    pub center: Point,
    pub sigma: f64,
    /// Relative darkening at the centre, in `[0, 1]`.
    pub depth: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticClump {
    pub ellipses: Vec<Ellipse>,
    /// Union of the objects, labelled 1.
    pub mask: LabelImage,
    /// Object `k` carries label `k + 1`.
    pub truth: LabelImage,
    /// Object centres.
    pub seeds: Vec<Point>,
    /// 8-bit grey levels, row-major.
    pub image: Vec<u8>,
}

impl SyntheticClump {
    pub fn width(&self) -> usize {
        self.mask.width
    }

    pub fn height(&self) -> usize {
        self.mask.height
    }

    pub fn intensity(&self) -> ScalarField {
        let raw: Vec<f64> = self.image.iter().map(|&v| f64::from(v)).collect();
        ScalarField::from_raw(self.width(), self.height(), &raw).expect("non-empty image")
    }
}

fn random_ellipse<R: Rng>(rng: &mut R, params: &SynthParams, center: Point) -> Ellipse {
    let a = rng.random_range(params.radius.0..=params.radius.1);
    let lo = (a / params.max_aspect).max(params.radius.0);
    let b = if lo < a { rng.random_range(lo..=a) } else { a };
    Ellipse {
        center,
        a,
        b,
        angle: rng.random_range(0.0..std::f64::consts::PI),
    }
}

/// Tries to attach one more object touching an existing one.
fn attach<R: Rng>(rng: &mut R, params: &SynthParams, placed: &[Ellipse]) -> Option<Ellipse> {
    for _ in 0..30 {
        let host = placed[rng.random_range(0..placed.len())];
        let theta = rng.random_range(0.0..std::f64::consts::TAU);
        let u = Point::new(theta.cos(), theta.sin());
        let mut e = random_ellipse(rng, params, Point::ZERO);
        let o = rng.random_range(params.overlap.0..=params.overlap.1);
        let d = (host.reach(u) + e.reach(-u)) * (1.0 - o);
        e.center = host.center + u * d;
        let fits = placed.iter().all(|p| {
            p.level(e.center) > 1.0 && e.level(p.center) > 1.0 && overlap(p, &e) <= params.overlap.1 + 1e-9
        });
        if fits {
            return Some(e);
        }
    }
    None
}

/// Pixel `p` belongs to the containing object whose centre is nearest;
/// equal distances go to the lower index.
fn owner(ellipses: &[Ellipse], p: Point) -> Option<usize> {
    let mut best: Option<(f64, usize)> = None;
    for (k, e) in ellipses.iter().enumerate() {
        if e.contains(p) {
            let d = p.distance(e.center);
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, k));
            }
        }
    }
    best.map(|(_, k)| k)
}

/// Places the ellipses in a frame with `margin` pixels to spare and builds
/// the mask and truth rasters. `None` when the union is not one hole-free
/// piece or some object's truth region is split.
fn rasterize(ellipses: &[Ellipse], margin: usize) -> Option<(Vec<Ellipse>, LabelImage, LabelImage)> {
    let (mut lo_x, mut lo_y, mut hi_x, mut hi_y) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for e in ellipses {
        let rx = e.reach(Point::new(1.0, 0.0)).max(e.a.max(e.b));
        lo_x = lo_x.min(e.center.x - rx);
        hi_x = hi_x.max(e.center.x + rx);
        lo_y = lo_y.min(e.center.y - rx);
        hi_y = hi_y.max(e.center.y + rx);
    }
    let shift = Point::new(margin as f64 - lo_x.floor(), margin as f64 - lo_y.floor());
    let placed: Vec<Ellipse> = ellipses.iter().map(|e| e.shifted(shift)).collect();
    let width = (hi_x.ceil() - lo_x.floor()) as usize + 2 * margin + 1;
    let height = (hi_y.ceil() - lo_y.floor()) as usize + 2 * margin + 1;

    let mut mask = LabelImage::new(width, height);
    let mut truth = LabelImage::new(width, height);
    for r in 0..height {
        for c in 0..width {
            if let Some(k) = owner(&placed, Point::new(c as f64, r as f64)) {
                mask.set(c, r, 1);
                truth.set(c, r, k as u32 + 1);
            }
        }
    }
    let fg: Vec<bool> = mask.data.iter().map(|&v| v != 0).collect();
    if connected_components(width, height, &fg, false).1 != 1 {
        return None;
    }
    let bg: Vec<bool> = fg.iter().map(|&b| !b).collect();
    if connected_components(width, height, &bg, false).1 != 1 {
        return None;
    }
    for k in 0..placed.len() {
        let own: Vec<bool> = truth.data.iter().map(|&v| v == k as u32 + 1).collect();
        if connected_components(width, height, &own, false).1 != 1 {
            return None;
        }
        let seed = placed[k].center;
        let (c, r) = ((seed.x + 0.5).floor() as usize, (seed.y + 0.5).floor() as usize);
        if truth.get(c, r) != k as u32 + 1 {
            return None;
        }
    }
    Some((placed, mask, truth))
}

/// Renders the grey image: domed objects of random brightness, darker seams
/// along truth borders, optional dark spots, blur, noise, 8-bit rounding.
fn render<R: Rng>(
    rng: &mut R,
    params: &SynthParams,
    ellipses: &[Ellipse],
    truth: &LabelImage,
    spots: &[DarkSpot],
) -> Result<Vec<u8>> {
    let (w, h) = (truth.width, truth.height);
    let brightness: Vec<f64> = ellipses
        .iter()
        .map(|_| rng.random_range(params.brightness.0..=params.brightness.1))
        .collect();
    let reach = (3.0 * params.seam_width).ceil() as i64;
    let mut values = vec![params.background; w * h];
    for r in 0..h {
        for c in 0..w {
            let l = truth.get(c, r);
            if l == 0 {
                continue;
            }
            let k = l as usize - 1;
            let p = Point::new(c as f64, r as f64);
            let dome = 0.85 + 0.15 * (1.0 - ellipses[k].level(p)).max(0.0);
            let mut seam = f64::INFINITY;
            for dr in -reach..=reach {
                for dc in -reach..=reach {
                    let o = truth.get_signed(c as i64 + dc, r as i64 + dr);
                    if o != 0 && o != l {
                        seam = seam.min(((dc * dc + dr * dr) as f64).sqrt());
                    }
                }
            }
            let mut v = brightness[k] * dome;
            if seam.is_finite() {
                v *= 1.0 - params.seam_depth * (-seam * seam / (2.0 * params.seam_width.powi(2))).exp();
            }
            for s in spots {
                let d2 = p.distance(s.center).powi(2);
                v *= 1.0 - s.depth * (-d2 / (2.0 * s.sigma * s.sigma)).exp();
            }
            values[r * w + c] = v;
        }
    }
    let field = ScalarField::new(w, h, values, FieldKind::Intensity)?;
    let blurred = gaussian_blur(&field, params.blur_sigma)?;
    let noise = Normal::new(0.0, params.noise_sigma).map_err(|e| Error::Config(e.to_string()))?;
    Ok(blurred
        .values()
        .iter()
        .map(|&v| ((v + noise.sample(rng)).clamp(0.0, 1.0) * 255.0).round() as u8)
        .collect())
}

fn check_params(params: &SynthParams) -> Result<()> {
    let ok = params.min_objects >= 1
        && params.min_objects <= params.max_objects
        && params.radius.0 > 0.0
        && params.radius.0 <= params.radius.1
        && params.max_aspect >= 1.0
        && params.overlap.0 <= params.overlap.1
        && params.overlap.1 < 1.0
        && params.brightness.0 <= params.brightness.1
        && params.blur_sigma > 0.0
        && params.noise_sigma >= 0.0;
    if ok {
        Ok(())
    } else {
        Err(Error::Config(format!("inconsistent synthesis parameters: {params:?}")))
    }
}

/// Generates one clump; identical `seed` and `params` give identical output.
pub fn generate_clump(seed: u64, params: &SynthParams) -> Result<SyntheticClump> {
    check_params(params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(params.min_objects..=params.max_objects);
    for _ in 0..params.max_attempts {
        let mut ellipses = vec![random_ellipse(&mut rng, params, Point::ZERO)];
        while ellipses.len() < n {
            match attach(&mut rng, params, &ellipses) {
                Some(e) => ellipses.push(e),
                None => break,
            }
        }
        if ellipses.len() < n {
            continue;
        }
        let Some((placed, mask, truth)) = rasterize(&ellipses, params.margin) else {
            continue;
        };
        let image = render(&mut rng, params, &placed, &truth, &[])?;
        return Ok(SyntheticClump {
            seeds: placed.iter().map(|e| e.center).collect(),
            ellipses: placed,
            mask,
            truth,
            image,
        });
    }
    Err(Error::GenerationFailed(params.max_attempts))
}

/// Renders a fixed arrangement of objects.
pub fn render_clump(
    ellipses: &[Ellipse],
    spots: &[DarkSpot],
    params: &SynthParams,
    seed: u64,
) -> Result<SyntheticClump> {
    check_params(params)?;
    let (placed, mask, truth) = rasterize(ellipses, params.margin)
        .ok_or_else(|| Error::InvalidBoundary("objects do not form one hole-free clump".into()))?;
    let shift = placed[0].center - ellipses[0].center;
    let spots: Vec<DarkSpot> = spots
        .iter()
        .map(|s| DarkSpot {
            center: s.center + shift,
            ..*s
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let image = render(&mut rng, params, &placed, &truth, &spots)?;
    Ok(SyntheticClump {
        seeds: placed.iter().map(|e| e.center).collect(),
        ellipses: placed,
        mask,
        truth,
        image,
    })
}

/// Two disks of radius `r` with centres `distance` apart.
pub fn two_disks(r: f64, distance: f64) -> Result<SyntheticClump> {
    let disks = [
        Ellipse::disk(Point::ZERO, r),
        Ellipse::disk(Point::new(distance, 0.0), r),
    ];
    render_clump(&disks, &[], &SynthParams::default(), 0)
}

/// Three disks of radius `r` on an equilateral triangle with side `side`,
/// with a dark spot over the common centre.
pub fn three_disks_dark_center(r: f64, side: f64) -> Result<SyntheticClump> {
    let h = side * 3f64.sqrt() / 2.0;
    let disks = [
        Ellipse::disk(Point::new(0.0, 0.0), r),
        Ellipse::disk(Point::new(side, 0.0), r),
        Ellipse::disk(Point::new(side / 2.0, h), r),
    ];
    let spot = DarkSpot {
        center: Point::new(side / 2.0, h / 3.0),
        sigma: side / 5.0,
        depth: 0.8,
    };
    render_clump(&disks, &[spot], &SynthParams::default(), 0)
}
