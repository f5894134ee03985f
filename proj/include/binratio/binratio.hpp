#ifndef BINRATIO_BINRATIO_HPP
#define BINRATIO_BINRATIO_HPP

#include "binratio/calculus.hpp"
#include "binratio/divergence.hpp"
#include "binratio/model.hpp"
#include "binratio/oracle.hpp"
#include "binratio/parallel.hpp"
#include "binratio/presets.hpp"
#include "binratio/rng.hpp"
#include "binratio/runner.hpp"
#include "binratio/sampling.hpp"

#endif  // BINRATIO_BINRATIO_HPP
