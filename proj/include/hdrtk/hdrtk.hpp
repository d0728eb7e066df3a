#pragma once

#include "hdrtk/calibration.hpp"
#include "hdrtk/camera.hpp"
#include "hdrtk/color.hpp"
#include "hdrtk/error.hpp"
#include "hdrtk/ibl.hpp"
#include "hdrtk/image.hpp"
#include "hdrtk/io.hpp"
#include "hdrtk/losses.hpp"
#include "hdrtk/metrics.hpp"
#include "hdrtk/pano.hpp"
#include "hdrtk/rng.hpp"
