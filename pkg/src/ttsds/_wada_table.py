"""Lookup table for the blind SNR estimator. Generated file.

Regenerate with: python tools/make_wada_table.py
"""

SNR_DB_MIN = -20.0
SNR_DB_MAX = 100.0

# g(snr) = ln E|z| - E[ln |z|] for integer snr in [-20, 100] dB,
# strictly increasing; see tools/make_wada_table.py for the model.
G_VALUES = (
    0.409434700096007, 0.4094594951107451, 0.4094976159139234, 0.40955584620767205,
    0.4096441247733904, 0.40977679641934395, 0.4099742173210841, 0.4102647321429064,
    0.4106869918821372, 0.411292510535872, 0.4121482693469093, 0.41333908045302925,
    0.4149693352431252, 0.41716370948770876, 0.42006640056779243, 0.4238385493713848,
    0.42865365635742003, 0.43469102739737514, 0.44212755240424995, 0.4511283861668142,
    0.4618373168232117, 0.4743677270185036, 0.4887950448545057, 0.5051514392401754,
    0.5234232580501326, 0.5435513826333105, 0.5654343372144413, 0.5889337041394611,
    0.6138811986908945, 0.6400866703442222, 0.6673463166376803, 0.6954504983920393,
    0.7241906979565311, 0.7533653320563417, 0.7827842903852402, 0.8122722025542334,
    0.8416705313428967, 0.8708386493165132, 0.8996540834668574, 0.9280121161614513,
    0.9558249180275905, 0.9830203660896022, 1.009540674037904, 1.0353409351834175,
    1.0603876534163335, 1.0846573164035074, 1.1081350476850336, 1.1308133599734433,
    1.1526910212405896, 1.1737720381308385, 1.194064754476545, 1.2135810599181935,
    1.2323357014893768, 1.25034568852103, 1.267629782859169, 1.284208064013991,
    1.3001015610288742, 1.315331942781988, 1.329921258910757, 1.3438917246252524,
    1.3572655432616876, 1.3700647611576402, 1.382311150093805, 1.394026113154263,
    1.4052306104126178, 1.4159451013263185, 1.4261895011832073, 1.4359831492982333,
    1.4453447870084197, 1.4542925437971541, 1.4628439301299672, 1.4710158357989558,
    1.4788245327581873, 1.4862856815903966, 1.4934143408810696, 1.5002249788907789,
    1.506731487015482, 1.512947194607885, 1.518884884803412, 1.5245568110550174,
    1.5299747141146876, 1.535149839363417, 1.5400929540569606, 1.5448143647172183,
    1.5493239342787466, 1.5536310990174624, 1.5577448851728812, 1.5616739252085188,
    1.5654264736695147, 1.5690104226058064, 1.5724333165382414, 1.5757023669536756,
    1.5788244663187663, 1.5818062016089476, 1.5846538673527122, 1.5873734781941402,
    1.5899707809798544, 1.5924512663776178, 1.594820180037767, 1.5970825333067697,
    1.5992431135055298, 1.6013064937852108, 1.6032770425731764, 1.6051589326227458,
    1.6069561496804559, 1.6086725007828457, 1.6103116221996459, 1.6118769870328231,
    1.6133719124871908, 1.6147995668245967, 1.6161629760144094, 1.6174650300929583,
    1.618708489242132, 1.619895989602277, 1.6210300488265381, 1.6221130713901437,
    1.6231473536640908, 1.6241350887635513, 1.6250783711805028, 1.6259792012122083,
    1.6268394891837539,
)
