//! f64 math routed through std when available, libm otherwise.

macro_rules! shim {
    ($($name:ident($($arg:ident),+)),+ $(,)?) => {
        $(
            #[inline(always)]
            pub fn $name($($arg: f64),+) -> f64 {
                #[cfg(feature = "std")]
                { f64::$name($($arg),+) }
                #[cfg(not(feature = "std"))]
                { libm::$name($($arg),+) }
            }
        )+
    };
}

shim! {
    exp(x),
    log10(x),
    sin(x),
    cos(x),
    acos(x),
    atan2(y, x),
    hypot(x, y),
    floor(x),
}

#[inline(always)]
pub fn ln(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        f64::ln(x)
    }
    #[cfg(not(feature = "std"))]
    {
        libm::log(x)
    }
}

#[inline(always)]
pub fn powf(x: f64, y: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        f64::powf(x, y)
    }
    #[cfg(not(feature = "std"))]
    {
        libm::pow(x, y)
    }
}

#[inline(always)]
pub fn abs(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        f64::abs(x)
    }
    #[cfg(not(feature = "std"))]
    {
        libm::fabs(x)
    }
}
