#pragma once

#include "fouriscale/config.hpp"
#include "fouriscale/error.hpp"
#include "fouriscale/filters.hpp"
#include "fouriscale/image.hpp"
#include "fouriscale/kernels.hpp"
#include "fouriscale/pipeline.hpp"
#include "fouriscale/random.hpp"
#include "fouriscale/sampling.hpp"
#include "fouriscale/spectral.hpp"
#include "fouriscale/tensor.hpp"
#include "fouriscale/tensor_io.hpp"
#include "fouriscale/verify.hpp"
