#pragma once

#include "rotten/errors.hpp"
#include "rotten/fidelity.hpp"
#include "rotten/grapefruit.hpp"
#include "rotten/numeric_oracle.hpp"
#include "rotten/pulse.hpp"
#include "rotten/rotor.hpp"
#include "rotten/sequence_io.hpp"
#include "rotten/spectrum.hpp"
#include "rotten/synthesis.hpp"
#include "rotten/trajectory.hpp"
