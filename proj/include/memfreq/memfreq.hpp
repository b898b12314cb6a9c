#ifndef MEMFREQ_MEMFREQ_HPP
#define MEMFREQ_MEMFREQ_HPP

#include "core_models.hpp"
#include "device_profile.hpp"
#include "errors.hpp"
#include "fitting.hpp"
#include "frequency_domain.hpp"
#include "offload.hpp"
#include "policy.hpp"

#endif // MEMFREQ_MEMFREQ_HPP
