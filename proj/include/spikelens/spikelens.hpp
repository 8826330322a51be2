#pragma once

// Umbrella header: image-to-spike-train encoding pipeline and its metrics.

#include "spikelens/canny.hpp"
#include "spikelens/codec.hpp"
#include "spikelens/errors.hpp"
#include "spikelens/idx.hpp"
#include "spikelens/image.hpp"
#include "spikelens/metrics.hpp"
#include "spikelens/signals.hpp"
#include "spikelens/sweep.hpp"
