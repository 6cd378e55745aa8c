#ifndef JTS_JTS_HPP
#define JTS_JTS_HPP

#include "core.hpp"
#include "errors.hpp"
#include "forward.hpp"
#include "inverse.hpp"
#include "io.hpp"
#include "reconstruct.hpp"
#include "rng.hpp"

#endif // JTS_JTS_HPP
