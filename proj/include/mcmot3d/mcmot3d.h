#ifndef MCMOT3D_H
#define MCMOT3D_H

/* Multi-camera 3D multi-object tracking and pose estimation.
 *
 * Plain C interface over the tracking core: opaque handles, status-code
 * returns, and a per-thread error message. All functions returning
 * mcmot_status leave outputs untouched on failure.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MCMOT_API __declspec(dllexport)
#else
#define MCMOT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mcmot_status {
  MCMOT_OK = 0,
  MCMOT_ERROR_IO = 1,               /* file missing or unwritable */
  MCMOT_ERROR_PARSE = 2,            /* malformed file content */
  MCMOT_ERROR_CONFIG = 3,           /* invalid configuration values */
  MCMOT_ERROR_INVALID_ARGUMENT = 4, /* bad pointer or argument value */
  MCMOT_ERROR_NUMERIC = 5,          /* numerical failure inside the core */
  MCMOT_ERROR_EMPTY = 6             /* operation needs non-empty input */
} mcmot_status;

#define MCMOT_MAX_KEYPOINTS 25

/* Message describing the calling thread's most recent failure. */
MCMOT_API const char* mcmot_last_error(void);

typedef struct mcmot_cameras mcmot_cameras;
typedef struct mcmot_detections mcmot_detections;
typedef struct mcmot_trajectories mcmot_trajectories;
typedef struct mcmot_scenario mcmot_scenario;
typedef struct mcmot_schedule mcmot_schedule;
typedef struct mcmot_tracker mcmot_tracker;

typedef struct mcmot_tracker_config {
  double dt;                   /* seconds between frames */
  double accel_noise;          /* white acceleration on the center, m/s^2 */
  double shape_walk_noise;     /* per-step std on log half-lengths */
  double keypoint_accel_noise; /* white acceleration per joint, m/s^2 */
  double ut_alpha, ut_kappa, ut_beta;
  double ground_gate;       /* meters between ground projections */
  double cost_gate;         /* nats; costlier pairs are infeasible */
  double miss_cost;         /* nats charged per unassigned track */
  double cluster_bandwidth; /* meters, birth clustering */
  int min_cluster_size;     /* detections needed to spawn a track */
  double birth_height;      /* initial center height, meters */
  double shape_prior[3];    /* initial half-extents, meters */
  double birth_position_var, birth_velocity_var, birth_shape_var;
  double birth_keypoint_position_var, birth_keypoint_velocity_var;
  int max_misses;       /* frames a track may coast before retiring */
  double duplicate_iou; /* 3D IoU above which tracks merge */
  int keypoint_count;   /* 15, 18 or 25 */
  double confidence_floor;
} mcmot_tracker_config;

MCMOT_API void mcmot_tracker_config_default(mcmot_tracker_config* config);

typedef struct mcmot_metric_config {
  int use_giou3d;             /* 0: ground-plane Euclidean distance */
  double match_threshold;     /* pair matches when distance <= this */
  double ospa_cutoff;
  int ospa_order;
  double pck_threshold;       /* meters */
  double person_match_radius; /* meters, pose metric pairing */
} mcmot_metric_config;

MCMOT_API void mcmot_metric_config_default(mcmot_metric_config* config);

/* Calibration */
MCMOT_API mcmot_status mcmot_cameras_load(const char* path, mcmot_cameras** out);
MCMOT_API mcmot_status mcmot_cameras_save(const mcmot_cameras* cameras, const char* path);
MCMOT_API mcmot_status mcmot_cameras_count(const mcmot_cameras* cameras, int* count);
MCMOT_API void mcmot_cameras_free(mcmot_cameras* cameras);

/* Detection logs */
MCMOT_API mcmot_status mcmot_detections_load(const char* path, mcmot_detections** out);
MCMOT_API mcmot_status mcmot_detections_save(const mcmot_detections* detections,
                                             const char* path);
MCMOT_API mcmot_status mcmot_detections_info(const mcmot_detections* detections,
                                             int* keypoint_count, int64_t* frame_count,
                                             int64_t* row_count);
/* Independently drops each detection with probability rate. */
MCMOT_API mcmot_status mcmot_detections_delete_random(const mcmot_detections* detections,
                                                      double rate, uint64_t seed,
                                                      mcmot_detections** out);
MCMOT_API void mcmot_detections_free(mcmot_detections* detections);

/* Trajectory sets */
MCMOT_API mcmot_status mcmot_trajectories_load(const char* path, mcmot_trajectories** out);
MCMOT_API mcmot_status mcmot_trajectories_save(const mcmot_trajectories* trajectories,
                                               const char* path);
MCMOT_API mcmot_status mcmot_trajectories_info(const mcmot_trajectories* trajectories,
                                               int* keypoint_count, int64_t* track_count,
                                               int64_t* point_count);
MCMOT_API void mcmot_trajectories_free(mcmot_trajectories* trajectories);

/* Camera on/off schedules */
MCMOT_API mcmot_status mcmot_schedule_load(const char* path, mcmot_schedule** out);
MCMOT_API void mcmot_schedule_free(mcmot_schedule* schedule);

/* Synthetic scenarios */
MCMOT_API mcmot_status mcmot_scenario_load(const char* path, mcmot_scenario** out);
MCMOT_API mcmot_status mcmot_scenario_set_seed(mcmot_scenario* scenario, uint64_t seed);
MCMOT_API void mcmot_scenario_free(mcmot_scenario* scenario);

/* Renders a scenario into ground-truth trajectories and the detection log
 * its cameras would produce. Either output may be NULL. */
MCMOT_API mcmot_status mcmot_simulate(const mcmot_scenario* scenario,
                                      mcmot_trajectories** truth_out,
                                      mcmot_detections** detections_out);

/* One 2D detection handed to the streaming tracker. Keypoints are x, y,
 * visible triples; visible is 0 or 1. */
typedef struct mcmot_detection {
  int camera_id;
  double left, top, width, height;
  double confidence;
  int keypoint_count;
  double keypoints[3 * MCMOT_MAX_KEYPOINTS];
} mcmot_detection;

/* One tracked person: box state plus joint positions (x, y, z triples). */
typedef struct mcmot_estimate {
  int64_t track_id;
  double position[3];
  double velocity[3];
  double half_extents[3];
  int keypoint_count;
  double keypoints[3 * MCMOT_MAX_KEYPOINTS];
} mcmot_estimate;

MCMOT_API mcmot_status mcmot_tracker_create(const mcmot_cameras* cameras,
                                            const mcmot_tracker_config* config,
                                            mcmot_tracker** out);
MCMOT_API mcmot_status mcmot_tracker_set_camera_active(mcmot_tracker* tracker, int camera_id,
                                                       int active);
/* Advances one frame; estimate_count (optional) receives how many estimates
 * mcmot_tracker_get_estimates can now return. */
MCMOT_API mcmot_status mcmot_tracker_step(mcmot_tracker* tracker, int64_t frame,
                                          const mcmot_detection* detections, size_t count,
                                          size_t* estimate_count);
MCMOT_API mcmot_status mcmot_tracker_get_estimates(const mcmot_tracker* tracker,
                                                   mcmot_estimate* buffer, size_t capacity,
                                                   size_t* written);
MCMOT_API void mcmot_tracker_free(mcmot_tracker* tracker);

/* Runs the tracker over a full detection log, frame 0 through the last
 * frame in the log. The optional schedule switches cameras on and off;
 * fps_out (optional) receives frames per second of pure tracking compute. */
MCMOT_API mcmot_status mcmot_track_run(const mcmot_cameras* cameras,
                                       const mcmot_detections* detections,
                                       const mcmot_tracker_config* config,
                                       const mcmot_schedule* schedule,
                                       mcmot_trajectories** out, double* fps_out);

typedef struct mcmot_metric_report {
  double mota;
  int64_t true_positives, false_positives, misses, id_switches, gt_count;
  double idf1;
  double ospa2;    /* final value of the growing-window series */
  double mpjpe_mm; /* meaningful only when pose_valid != 0 */
  double pck;      /* percentage in [0, 100], same validity */
  int pose_valid;  /* 0 when no person-frame ever matched */
} mcmot_metric_report;

MCMOT_API mcmot_status mcmot_evaluate(const mcmot_trajectories* truth,
                                      const mcmot_trajectories* estimate,
                                      const mcmot_metric_config* config,
                                      mcmot_metric_report* report);

/* Growing-window track-level OSPA, one value per frame. Pass values = NULL
 * to query the needed capacity through count. */
MCMOT_API mcmot_status mcmot_evaluate_ospa2(const mcmot_trajectories* truth,
                                            const mcmot_trajectories* estimate,
                                            const mcmot_metric_config* config, int64_t* frames,
                                            double* values, size_t capacity, size_t* count);

#ifdef __cplusplus
}
#endif

#endif /* MCMOT3D_H */
