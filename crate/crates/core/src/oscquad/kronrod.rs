//! 7-point Gauss / 15-point Kronrod rule on a complex-valued integrand.

use num_complex::Complex;

use crate::error::QuadError;
use crate::scalar::Real;

use super::adaptive::PanelEval;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Applies the GK15 pair on `[a, b]`.
///
/// The error estimate is the raw Kronrod-Gauss difference, floored at the
/// rounding level of the weighted absolute integrand.
pub(crate) fn gk15<T, F>(f: &F, a: T, b: T) -> Result<PanelEval<T>, QuadError>
where
    T: Real,
    F: Fn(T) -> Complex<T> + ?Sized,
{
    let center = (a + b) / T::lit(2.0);
    let half = (b - a) / T::lit(2.0);

    let eval = |z: T| -> Result<Complex<T>, QuadError> {
        let v = f(z);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(QuadError::NonFinite { z: z.as_f64() })
        }
    };

    let fc = eval(center)?;
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    let mut res_abs = fc.norm() * T::lit(WGK[7]);

    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        let w = T::lit(WGK[j]);
        kronrod = kronrod + (f1 + f2) * w;
        res_abs += (f1.norm() + f2.norm()) * w;
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * T::lit(WG[j / 2]);
        }
    }

    let value = kronrod * half;
    let diff = ((kronrod - gauss) * half).norm();
    let floor = T::lit(50.0) * T::epsilon() * res_abs * half.abs();
    Ok(PanelEval {
        value,
        err: diff.max(floor),
        floor,
        fallback: false,
    })
}
