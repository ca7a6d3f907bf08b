#include "fstm/vocabulary.hpp"

namespace fstm {

namespace {

// Verb-like predicate names for english-mode vocabularies.
const char* const kVerbs[] = {
    "Abandon", "Absorb", "Accelerate", "Accept", "Accompany", "Accuse", "Achieve", "Acquire",
    "Admire", "Admit", "Adopt", "Advance", "Advise", "Agree", "Allow", "Announce",
    "Answer", "Appear", "Applaud", "Approach", "Approve", "Argue", "Arrange", "Arrive",
    "Ask", "Assemble", "Assist", "Attack", "Attempt", "Attend", "Attract", "Avoid",
    "Bake", "Balance", "Bargain", "Bark", "Behave", "Believe", "Belong", "Bend",
    "Blink", "Bloom", "Blush", "Boast", "Boom", "Borrow", "Bounce", "Bow",
    "Breathe", "Brew", "Build", "Burn", "Buy", "Calculate", "Camp", "Carry",
    "Carve", "Celebrate", "Challenge", "Change", "Charge", "Chase", "Cheer", "Chew",
    "Choose", "Chop", "Claim", "Clap", "Climb", "Collect", "Comb", "Compete",
    "Complain", "Compose", "Conceal", "Confess", "Connect", "Consider", "Construct", "Consult",
    "Continue", "Cook", "Cooperate", "Cough", "Count", "Crawl", "Create", "Criticize",
    "Cross", "Cruise", "Cry", "Dance", "Dare", "Debate", "Decide", "Declare",
    "Decorate", "Defend", "Delay", "Deliver", "Demand", "Deny", "Depart", "Describe",
    "Design", "Destroy", "Develop", "Dig", "Dine", "Disagree", "Discover", "Discuss",
    "Dive", "Donate", "Doubt", "Drag", "Draw", "Dream", "Drift", "Drink",
    "Drive", "Drop", "Drum", "Earn", "Eat", "Echo", "Edit", "Educate",
    "Elect", "Embrace", "Emerge", "Employ", "Encourage", "Endure", "Enjoy", "Enter",
    "Entertain", "Escape", "Evaluate", "Examine", "Exercise", "Exist", "Expand", "Expect",
    "Explain", "Explore", "Express", "Fade", "Fail", "Fall", "Farm", "Fear",
    "Fetch", "Fight", "Finish", "Fish", "Fix", "Flee", "Float", "Flourish",
    "Fly", "Fold", "Follow", "Forget", "Forgive", "Gallop", "Gather", "Gaze",
    "Giggle", "Glow", "Grab", "Greet", "Grow", "Guard", "Guess", "Guide",
    "Hammer", "Harvest", "Heal", "Hear", "Help", "Hide", "Hike", "Hope",
    "Hug", "Hum", "Hunt", "Hurry", "Imagine", "Imitate", "Improve", "Inspect",
    "Inspire", "Install", "Introduce", "Invent", "Invest", "Invite", "Jog", "Join",
    "Joke", "Judge", "Juggle", "Jump", "Kick", "Kneel", "Knit", "Knock",
    "Laugh", "Launch", "Lean", "Leap", "Learn", "Lecture", "Lift", "Listen",
    "March", "Measure", "Meditate", "Meet", "Mend", "Mentor", "Migrate", "Mix",
    "Mourn", "Move", "Mumble", "Navigate", "Negotiate", "Nod", "Notice", "Obey",
    "Observe", "Obtain", "Offer", "Operate", "Order", "Organize", "Paint", "Pardon",
    "Participate", "Pause", "Perform", "Persuade", "Photograph", "Plan", "Plant", "Play",
    "Plead", "Point", "Polish", "Ponder", "Practice", "Praise", "Pray", "Predict",
    "Prepare", "Present", "Preserve", "Pretend", "Print", "Produce", "Promise", "Protect",
    "Protest", "Publish", "Pull", "Punch", "Push", "Question", "Race", "Read",
    "Rebuild", "Recite", "Recognize", "Recommend", "Record", "Recover", "Reflect", "Refuse",
    "Rehearse", "Rejoice", "Relax", "Remember", "Remind", "Rent", "Repair", "Repeat",
    "Reply", "Report", "Rescue", "Research", "Resist", "Respond", "Rest", "Retire",
    "Retreat", "Return", "Reveal", "Ride", "Roam", "Run", "Sail", "Salute",
    "Save", "Scream", "Sculpt", "Search", "Select", "Sell", "Serve", "Sew",
    "Share", "Shiver", "Shop", "Shout", "Sigh", "Sing", "Sketch", "Ski",
    "Sleep", "Slide", "Smile", "Sneeze", "Soar", "Speak", "Sprint", "Stare",
    "Stretch", "Struggle", "Study", "Stumble", "Succeed", "Suggest", "Supervise", "Support",
    "Surf", "Surrender", "Swim", "Swing", "Talk", "Teach", "Tend", "Thank",
    "Think", "Thrive", "Toss", "Train", "Translate", "Travel", "Tremble", "Trust",
    "Tumble", "Type", "Understand", "Unite", "Vanish", "Visit", "Volunteer", "Vote",
    "Wait", "Walk", "Wander", "Warn", "Wave", "Weave", "Weep", "Welcome",
    "Whisper", "Whistle", "Win", "Wink", "Wish", "Wonder", "Work", "Worry",
    "Wrestle", "Write", "Yawn", "Yell", "Yield", "Yodel", "Zigzag", "Zoom",
};

// Person-like object names for english-mode vocabularies.
const char* const kNames[] = {
    "Aaron", "Abigail", "Adam", "Adrian", "Aisha", "Alan", "Albert", "Alejandro",
    "Alexa", "Alexander", "Alice", "Alicia", "Allison", "Alma", "Amanda", "Amber",
    "Amelia", "Amir", "Amy", "Andre", "Andrea", "Andrew", "Angela", "Anita",
    "Anna", "Anthony", "Antonia", "April", "Archie", "Ariel", "Arthur", "Ashley",
    "Astrid", "Aubrey", "Audrey", "Austin", "Barbara", "Beatrice", "Becky", "Benjamin",
    "Bernard", "Bertha", "Bianca", "Blake", "Bonnie", "Boris", "Brandon", "Brenda",
    "Brian", "Bridget", "Brooke", "Bruce", "Bruno", "Bryan", "Caleb", "Camila",
    "Candice", "Carl", "Carla", "Carlos", "Carmen", "Carol", "Caroline", "Carter",
    "Cassandra", "Catherine", "Cecilia", "Cedric", "Celeste", "Charles", "Charlotte", "Chelsea",
    "Chester", "Chloe", "Christian", "Christina", "Christopher", "Cindy", "Claire", "Clara",
    "Clarence", "Claudia", "Clifford", "Clinton", "Colin", "Constance", "Cora", "Corey",
    "Cynthia", "Daisy", "Dale", "Dana", "Daniel", "Danielle", "Daphne", "Darius",
    "Darlene", "David", "Dawn", "Deborah", "Dennis", "Derek", "Desmond", "Diana",
    "Diego", "Dmitri", "Dolores", "Dominic", "Donald", "Donna", "Dora", "Dorian",
    "Doris", "Dorothy", "Douglas", "Duncan", "Dustin", "Dylan", "Earl", "Edgar",
    "Edith", "Edmund", "Eduardo", "Edward", "Edwin", "Elaine", "Eleanor", "Elena",
    "Eli", "Elias", "Elisa", "Elizabeth", "Ella", "Ellen", "Elliot", "Eloise",
    "Elsa", "Emil", "Emily", "Emma", "Enrique", "Eric", "Erika", "Ernest",
    "Esther", "Ethan", "Eugene", "Eva", "Evelyn", "Ezra", "Fabian", "Faith",
    "Felicia", "Felix", "Fernando", "Fiona", "Florence", "Frances", "Francis", "Frank",
    "Franklin", "Freya", "Gabriel", "Gabriela", "Gail", "Garrett", "Gary", "Gavin",
    "Gemma", "Geoffrey", "George", "Georgia", "Gerald", "Gilbert", "Gina", "Giselle",
    "Glen", "Gloria", "Gordon", "Grace", "Graham", "Grant", "Gregory", "Greta",
    "Guillermo", "Gustav", "Gwen", "Hannah", "Harold", "Harriet", "Harvey", "Hazel",
    "Heather", "Hector", "Heidi", "Helen", "Henry", "Herbert", "Herman", "Hilda",
    "Holly", "Homer", "Hope", "Horace", "Howard", "Hugo", "Ian", "Ida",
    "Ignacio", "Igor", "Imogen", "Ingrid", "Irene", "Iris", "Irma", "Isaac",
    "Isabel", "Isaiah", "Ivan", "Ivy", "Jack", "Jacob", "Jacqueline", "James",
    "Jane", "Janet", "Jasmine", "Jason", "Javier", "Jean", "Jeffrey", "Jennifer",
    "Jeremy", "Jerome", "Jessica", "Joan", "Joanna", "Joel", "John", "Jonah",
    "Jonathan", "Jordan", "Jorge", "Joseph", "Josephine", "Joshua", "Joyce", "Juan",
    "Judith", "Julia", "Julian", "Juliet", "Justin", "Kara", "Karen", "Karl",
    "Katherine", "Kathleen", "Keith", "Kelly", "Kelvin", "Kenneth", "Kevin", "Kimberly",
    "Kirk", "Kristen", "Kurt", "Kyle", "Lana", "Lance", "Larry", "Laura",
    "Lauren", "Lawrence", "Leah", "Leo", "Leonard", "Leonora", "Leslie", "Lewis",
    "Liam", "Lillian", "Linda", "Lionel", "Lisa", "Logan", "Lois", "Lorenzo",
    "Lorraine", "Louis", "Louise", "Lucas", "Lucia", "Lucille", "Luis", "Luke",
    "Lydia", "Mabel", "Madeline", "Magnus", "Malcolm", "Marcel", "Marcia", "Marcus",
    "Margaret", "Maria", "Marian", "Mario", "Marion", "Marjorie", "Mark", "Marlene",
    "Martha", "Martin", "Marvin", "Mary", "Mateo", "Matthew", "Maureen", "Maurice",
    "Maxine", "Megan", "Melanie", "Melissa", "Mercedes", "Michael", "Michelle", "Miguel",
    "Mildred", "Miles", "Milton", "Miranda", "Miriam", "Mitchell", "Molly", "Monica",
    "Morgan", "Moses", "Muriel", "Myra", "Nadia", "Nancy", "Naomi", "Natalie",
    "Nathan", "Neil", "Nelson", "Nicholas", "Nicole", "Nigel", "Nina", "Noah",
    "Nora", "Norman", "Octavia", "Olga", "Oliver", "Olivia", "Omar", "Oscar",
    "Otto", "Owen", "Pablo", "Pamela", "Patricia", "Patrick", "Paul", "Paula",
    "Pearl", "Pedro", "Penelope", "Percy", "Peter", "Philip", "Phoebe", "Phyllis",
    "Preston", "Priscilla", "Quentin", "Quinn", "Rachel", "Ralph", "Ramona", "Randall",
    "Raquel", "Raymond", "Rebecca", "Regina", "Reginald", "Renee", "Rex", "Rhonda",
    "Ricardo", "Richard", "Rita", "Robert", "Roberta", "Rodney", "Roger", "Roland",
    "Roman", "Ronald", "Rosa", "Rosalind", "Rose", "Ross", "Roxanne", "Ruby",
    "Rudolph", "Russell", "Ruth", "Ryan", "Sabrina", "Salvador", "Samantha", "Samuel",
    "Sandra", "Sara", "Scott", "Sebastian", "Selena", "Serena", "Seth", "Shannon",
    "Sharon", "Sheila", "Shirley", "Sidney", "Silas", "Simon", "Simone", "Sofia",
    "Solomon", "Sonia", "Sophie", "Spencer", "Stacy", "Stanley", "Stella", "Stephanie",
    "Stephen", "Steven", "Stuart", "Susan", "Sylvia", "Tabitha", "Tamara", "Tanya",
    "Teresa", "Terrence", "Thaddeus", "Theodore", "Theresa", "Thomas", "Timothy", "Tobias",
    "Todd", "Tracy", "Travis", "Trevor", "Tristan", "Troy", "Ulysses", "Ursula",
    "Valerie", "Vanessa", "Vera", "Vernon", "Veronica", "Victor", "Victoria", "Vincent",
    "Viola", "Violet", "Virgil", "Virginia", "Vivian", "Wallace", "Walter", "Wanda",
    "Warren", "Wayne", "Wendell", "Wendy", "Wesley", "Whitney", "Wilbur", "Wilfred",
    "William", "Willis", "Wilma", "Winston", "Xavier", "Ximena", "Yolanda", "Yolonda",
    "Yusuf", "Yvette", "Yvonne", "Zachary", "Zane", "Zelda", "Zoe", "Zora",
};

} // namespace

std::span<const char* const> verb_word_list() {
    return {kVerbs, sizeof(kVerbs) / sizeof(kVerbs[0])};
}

std::span<const char* const> name_word_list() {
    return {kNames, sizeof(kNames) / sizeof(kNames[0])};
}

} // namespace fstm
