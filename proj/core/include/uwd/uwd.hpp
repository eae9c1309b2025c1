#pragma once

#include "uwd/buffer.hpp"
#include "uwd/camera.hpp"
#include "uwd/config.hpp"
#include "uwd/dataset.hpp"
#include "uwd/error.hpp"
#include "uwd/evaluation.hpp"
#include "uwd/fit_depth.hpp"
#include "uwd/image.hpp"
#include "uwd/imaging.hpp"
#include "uwd/io.hpp"
#include "uwd/losses.hpp"
#include "uwd/masking.hpp"
#include "uwd/rotation.hpp"
#include "uwd/serialization.hpp"
#include "uwd/uifm.hpp"
