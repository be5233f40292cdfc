#pragma once

#include "tdac/analysis.hpp"
#include "tdac/calibrate.hpp"
#include "tdac/code.hpp"
#include "tdac/config.hpp"
#include "tdac/convert.hpp"
#include "tdac/error.hpp"
#include "tdac/fit.hpp"
#include "tdac/leaky.hpp"
#include "tdac/schedule.hpp"
#include "tdac/signed.hpp"
#include "tdac/waveform.hpp"
