#pragma once

#include "specres/freeprob/deep_linear.hpp"
#include "specres/freeprob/density.hpp"
#include "specres/freeprob/endpoint.hpp"
#include "specres/freeprob/model.hpp"
#include "specres/freeprob/moments.hpp"
#include "specres/freeprob/polynomial.hpp"
#include "specres/freeprob/single_layer.hpp"
#include "specres/freeprob/transforms.hpp"
